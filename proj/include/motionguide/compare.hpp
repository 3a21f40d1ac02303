#pragma once

#include <array>
#include <deque>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "motionguide/normalize.hpp"

namespace motionguide {

struct CompareConfig {
    /// Exactly ten joints, ten points each.
    std::vector<CanonicalJoint> scored_joints = {
        CanonicalJoint::Head,       CanonicalJoint::Chest,      CanonicalJoint::LeftElbow,
        CanonicalJoint::RightElbow, CanonicalJoint::LeftWrist,  CanonicalJoint::RightWrist,
        CanonicalJoint::LeftKnee,   CanonicalJoint::RightKnee,  CanonicalJoint::LeftAnkle,
        CanonicalJoint::RightAnkle};
    /// Normalized distance at which a joint scores zero.
    double d_max = 0.5;
    double limb_blue = 0.10;
    double limb_yellow = 0.25;
    int smoothing_window = 5;
};

inline constexpr std::size_t kScoredJointCount = 10;
inline constexpr double kPointsPerJoint = 10.0;

/// Throws ValidationError unless: ten distinct joints, 0 < blue < yellow < d_max,
/// smoothing window >= 1.
void validate(const CompareConfig& cfg);

enum class Limb { LeftArm, RightArm, LeftLeg, RightLeg };
inline constexpr std::array<Limb, 4> kLimbs = {Limb::LeftArm, Limb::RightArm, Limb::LeftLeg, Limb::RightLeg};

std::string_view name_of(Limb limb);
/// Shoulder-elbow-wrist or hip-knee-ankle.
std::array<CanonicalJoint, 3> limb_joints(Limb limb);

enum class IndicatorColor { Blue, Yellow, Red };
std::string_view name_of(IndicatorColor color);

struct ScoreReport {
    std::vector<std::pair<CanonicalJoint, double>> per_joint;
    double total = 0.0;
    /// total rounded half up.
    int display_total = 0;

    bool operator==(const ScoreReport&) const = default;
};

/// Euclidean distance of one joint in normalized space. Throws CompareError
/// when either pose lacks the joint.
double joint_difference(const NormalizedPose& user, const NormalizedPose& instructor, CanonicalJoint joint);
double joint_difference(const NormalizedPose& user, const NormalizedPose& instructor, std::string_view joint);

/// Per joint: 10 * max(0, 1 - diff / d_max); total is their sum.
ScoreReport pose_score(const NormalizedPose& user, const NormalizedPose& instructor, const CompareConfig& cfg);

/// Mean difference over the limb's joints, then Blue < limb_blue <= Yellow < limb_yellow <= Red.
IndicatorColor limb_indicator(const NormalizedPose& user, const NormalizedPose& instructor, Limb limb,
                              const CompareConfig& cfg);
IndicatorColor indicator_for(double mean_difference, const CompareConfig& cfg);

/// Mean of the last `smoothing_window` totals. Throws DomainError when empty.
double smoothed_score(std::span<const ScoreReport> history, const CompareConfig& cfg);

/// Bounded window of recent totals owned by one session.
class ScoreHistory {
public:
    explicit ScoreHistory(int window) : window_(static_cast<std::size_t>(window < 1 ? 1 : window)) {}

    /// Adds a total and returns the mean over the window.
    double push(double total);
    void clear() { totals_.clear(); }
    bool empty() const noexcept { return totals_.empty(); }

private:
    std::size_t window_;
    std::deque<double> totals_;
};

}  // namespace motionguide

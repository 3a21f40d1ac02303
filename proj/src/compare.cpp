#include "motionguide/compare.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "motionguide/error.hpp"

namespace motionguide {

void validate(const CompareConfig& cfg) {
    if (cfg.scored_joints.size() != kScoredJointCount)
        throw ValidationError("compare config needs exactly 10 scored joints, got " +
                              std::to_string(cfg.scored_joints.size()));
    std::set<CanonicalJoint> unique(cfg.scored_joints.begin(), cfg.scored_joints.end());
    if (unique.size() != cfg.scored_joints.size()) throw ValidationError("scored joints must be distinct");
    if (!(cfg.limb_blue > 0.0 && cfg.limb_blue < cfg.limb_yellow))
        throw ValidationError("limb thresholds must satisfy 0 < limb_blue < limb_yellow");
    if (!(cfg.d_max > cfg.limb_yellow) || !std::isfinite(cfg.d_max))
        throw ValidationError("d_max must exceed limb_yellow");
    if (cfg.smoothing_window < 1) throw ValidationError("smoothing_window must be >= 1");
}

std::string_view name_of(Limb limb) {
    switch (limb) {
        case Limb::LeftArm: return "left_arm";
        case Limb::RightArm: return "right_arm";
        case Limb::LeftLeg: return "left_leg";
        case Limb::RightLeg: return "right_leg";
    }
    return "?";
}

std::array<CanonicalJoint, 3> limb_joints(Limb limb) {
    using J = CanonicalJoint;
    switch (limb) {
        case Limb::LeftArm: return {J::LeftShoulder, J::LeftElbow, J::LeftWrist};
        case Limb::RightArm: return {J::RightShoulder, J::RightElbow, J::RightWrist};
        case Limb::LeftLeg: return {J::LeftHip, J::LeftKnee, J::LeftAnkle};
        case Limb::RightLeg: return {J::RightHip, J::RightKnee, J::RightAnkle};
    }
    return {};
}

std::string_view name_of(IndicatorColor color) {
    switch (color) {
        case IndicatorColor::Blue: return "blue";
        case IndicatorColor::Yellow: return "yellow";
        case IndicatorColor::Red: return "red";
    }
    return "?";
}

double joint_difference(const NormalizedPose& user, const NormalizedPose& instructor, CanonicalJoint joint) {
    const auto& u = user[joint];
    const auto& i = instructor[joint];
    if (!u) throw CompareError("user pose lacks joint '" + std::string(name_of(joint)) + "'");
    if (!i) throw CompareError("instructor pose lacks joint '" + std::string(name_of(joint)) + "'");
    return distance(*u, *i);
}

double joint_difference(const NormalizedPose& user, const NormalizedPose& instructor, std::string_view joint) {
    const auto j = canonical_joint(joint);
    if (!j) throw CompareError("'" + std::string(joint) + "' is not a canonical joint");
    return joint_difference(user, instructor, *j);
}

ScoreReport pose_score(const NormalizedPose& user, const NormalizedPose& instructor, const CompareConfig& cfg) {
    ScoreReport r;
    r.per_joint.reserve(cfg.scored_joints.size());
    for (CanonicalJoint j : cfg.scored_joints) {
        const double diff = joint_difference(user, instructor, j);
        const double points = kPointsPerJoint * std::max(0.0, 1.0 - diff / cfg.d_max);
        r.per_joint.emplace_back(j, points);
        r.total += points;
    }
    r.display_total = static_cast<int>(std::floor(r.total + 0.5));
    return r;
}

IndicatorColor indicator_for(double mean_difference, const CompareConfig& cfg) {
    if (mean_difference < cfg.limb_blue) return IndicatorColor::Blue;
    if (mean_difference < cfg.limb_yellow) return IndicatorColor::Yellow;
    return IndicatorColor::Red;
}

IndicatorColor limb_indicator(const NormalizedPose& user, const NormalizedPose& instructor, Limb limb,
                              const CompareConfig& cfg) {
    double sum = 0.0;
    const auto joints = limb_joints(limb);
    for (CanonicalJoint j : joints) sum += joint_difference(user, instructor, j);
    return indicator_for(sum / static_cast<double>(joints.size()), cfg);
}

double smoothed_score(std::span<const ScoreReport> history, const CompareConfig& cfg) {
    if (history.empty()) throw DomainError("smoothing needs at least one score");
    const std::size_t n = std::min(history.size(), static_cast<std::size_t>(std::max(cfg.smoothing_window, 1)));
    double sum = 0.0;
    for (std::size_t i = history.size() - n; i < history.size(); ++i) sum += history[i].total;
    return sum / static_cast<double>(n);
}

double ScoreHistory::push(double total) {
    totals_.push_back(total);
    if (totals_.size() > window_) totals_.pop_front();
    double sum = 0.0;
    for (double t : totals_) sum += t;
    return sum / static_cast<double>(totals_.size());
}

}  // namespace motionguide

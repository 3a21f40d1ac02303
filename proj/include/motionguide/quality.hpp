#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "motionguide/skeleton.hpp"

namespace motionguide {

struct QualityConfig {
    /// Allowed relative bone-length deviation from the rest offsets.
    double bone_length_tolerance = 0.02;
    /// m/s, measured relative to the root.
    double max_joint_speed = 12.0;
    /// m per frame.
    double max_root_jump = 0.5;
    /// m below the ground plane tolerated for feet.
    double ground_penetration = 0.05;
    /// m between a wrist and the opposite forearm.
    double limb_proximity_min = 0.03;

    std::vector<std::string> foot_joints = {"left_ankle", "right_ankle", "left_foot", "right_foot"};
    std::string left_elbow = "left_elbow";
    std::string left_wrist = "left_wrist";
    std::string right_elbow = "right_elbow";
    std::string right_wrist = "right_wrist";
};

/// Throws ValidationError unless every threshold is positive.
void validate(const QualityConfig& cfg);

enum class Glitch : std::uint8_t {
    BoneStretch = 1 << 0,
    VelocitySpike = 1 << 1,
    RootTeleport = 1 << 2,
    GroundPenetration = 1 << 3,
    LimbInterpenetration = 1 << 4,
};

inline constexpr std::array<Glitch, 5> kGlitches = {Glitch::BoneStretch, Glitch::VelocitySpike,
                                                    Glitch::RootTeleport, Glitch::GroundPenetration,
                                                    Glitch::LimbInterpenetration};
std::string_view name_of(Glitch g);

struct QualityReport {
    /// Bitmask of Glitch values per frame.
    std::vector<std::uint8_t> frame_flags;
    double clean_fraction = 1.0;
    std::array<std::size_t, kGlitches.size()> per_category{};
    /// Checks that could not run (single frame, missing joints).
    std::vector<std::string> notes;

    bool has(std::size_t frame, Glitch g) const {
        return (frame_flags[frame] & static_cast<std::uint8_t>(g)) != 0;
    }
    std::size_t count(Glitch g) const;
    std::size_t clean_frames() const;
};

/// Per-frame plausibility checks. Spikes are judged against the last
/// unflagged frame, so a one-frame excursion flags only that frame and a
/// permanent jump flags only its first frame.
QualityReport check_clip(const MotionClip& clip, const QualityConfig& cfg = {});

/// Text table followed by a `json:` line with the same content.
std::string summarize(const QualityReport& report);
std::string to_json(const QualityReport& report);

}  // namespace motionguide

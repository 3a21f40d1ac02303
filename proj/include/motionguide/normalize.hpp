#pragma once

#include <array>
#include <optional>
#include <vector>

#include "motionguide/builtin.hpp"
#include "motionguide/joint_map.hpp"
#include "motionguide/skeleton.hpp"

namespace motionguide {

/// World pose on the canonical 20-joint set; unmapped joints are absent.
struct CanonicalPose {
    std::array<std::optional<JointPose>, kCanonicalJointCount> joints;

    const std::optional<JointPose>& operator[](CanonicalJoint j) const { return joints[index(j)]; }
    std::optional<JointPose>& operator[](CanonicalJoint j) { return joints[index(j)]; }
};

/// Comparison-ready positions: pelvis at the origin, hips facing +Z, unit
/// ankle-to-head vertical span.
struct NormalizedPose {
    std::array<std::optional<Vec3>, kCanonicalJointCount> positions;
    /// The yaw that was removed.
    Quat facing;
    /// Meters per normalized unit.
    double height_scale = 1.0;

    const std::optional<Vec3>& operator[](CanonicalJoint j) const { return positions[index(j)]; }
};

/// Maps a source world pose onto canonical joints. Throws RetargetError naming
/// the missing source joint when a required target cannot be filled, or when a
/// pair targets a non-canonical name.
CanonicalPose retarget(const WorldPose& pose, const JointMapTable& map);

/// Ankle-mean to head vertical extent, meters. Requires head and both ankles.
double vertical_span(const CanonicalPose& pose);

/// Per-frame normalization. Requires pelvis, head, both hips and both ankles;
/// throws NormalizeError when the span is at most 1 cm.
NormalizedPose normalize(const CanonicalPose& pose);
/// Normalization dividing by max(frame span, reference_span), so crouching
/// frames keep the standing scale.
NormalizedPose normalize(const CanonicalPose& pose, double reference_span);

/// Causal 95th-percentile (nearest rank) of the vertical spans seen so far.
class SpanTracker {
public:
    /// Records the frame's span and returns the reference for this frame.
    double observe(double span);
    double reference() const;
    std::size_t count() const noexcept { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

/// Retarget then normalize with a causal span reference, frame by frame.
/// Offline and live sessions both run poses through this so their outputs
/// match exactly.
class PosePipeline {
public:
    explicit PosePipeline(JointMapTable map) : map_(std::move(map)) {}

    NormalizedPose push(const WorldPose& pose);
    const JointMapTable& map() const noexcept { return map_; }

private:
    JointMapTable map_;
    SpanTracker spans_;
};

/// Every frame of `clip` through a fresh PosePipeline.
std::vector<NormalizedPose> normalize_clip(const MotionClip& clip, const JointMapTable& map);

/// Clip on a uniform grid at `target_fps` spanning the same duration:
/// round(duration * target_fps) + 1 frames, linear / slerp interpolation.
MotionClip resample(const MotionClip& clip, double target_fps);

}  // namespace motionguide

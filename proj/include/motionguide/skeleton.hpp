#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionguide/math.hpp"

namespace motionguide {

struct Joint {
    std::string name;
    std::optional<std::size_t> parent;
    /// Rest-pose offset from the parent, meters.
    Vec3 offset;
    /// BVH "End Site" offset, kept so hierarchies survive serialization.
    std::optional<Vec3> end_site;

    bool operator==(const Joint&) const = default;
};

/// Joint hierarchy in topological order (every parent precedes its children).
/// Axes are fixed: Y up, Z forward.
class Skeleton {
public:
    Skeleton() = default;
    /// Validates the hierarchy; throws StructuralError on violation.
    explicit Skeleton(std::vector<Joint> joints);

    const std::vector<Joint>& joints() const noexcept { return joints_; }
    std::size_t size() const noexcept { return joints_.size(); }
    const Joint& operator[](std::size_t i) const { return joints_[i]; }

    std::optional<std::size_t> find(std::string_view name) const;
    /// Throws StructuralError naming the joint when absent.
    std::size_t index_of(std::string_view name) const;

    bool operator==(const Skeleton&) const = default;

private:
    std::vector<Joint> joints_;
};

/// One sample of a motion. Rotations are local (relative to the parent).
struct PoseFrame {
    Vec3 root_position;
    std::vector<Quat> joint_rotations;
    /// Per-frame local translations overriding the skeleton's rest offsets
    /// (BVH position channels on non-root joints, streamed positions). Empty
    /// means every joint uses its rest offset; otherwise sized to the skeleton,
    /// and entry 0 is unused.
    std::vector<Vec3> joint_offsets;

    bool operator==(const PoseFrame&) const = default;
};

/// Offset actually used for `joint` in `frame`.
Vec3 effective_offset(const Skeleton& skeleton, const PoseFrame& frame, std::size_t joint);

struct JointPose {
    std::string name;
    Vec3 position;
    Quat rotation;
};

using WorldPose = std::vector<JointPose>;

/// Root-to-leaf accumulation of local transforms. Throws StructuralError when
/// the frame is not sized to the skeleton.
WorldPose forward_kinematics(const Skeleton& skeleton, const PoseFrame& frame);

class MotionClip {
public:
    MotionClip() = default;
    /// Validates: at least one frame, frames sized to the skeleton, fps finite
    /// and positive. Throws StructuralError / DomainError.
    MotionClip(Skeleton skeleton, std::vector<PoseFrame> frames, double fps);

    const Skeleton& skeleton() const noexcept { return skeleton_; }
    const std::vector<PoseFrame>& frames() const noexcept { return frames_; }
    std::size_t frame_count() const noexcept { return frames_.size(); }
    double fps() const noexcept { return fps_; }

    bool operator==(const MotionClip&) const = default;

private:
    Skeleton skeleton_;
    std::vector<PoseFrame> frames_;
    double fps_ = 30.0;
};

/// (frame_count - 1) / fps, seconds.
double clip_duration(const MotionClip& clip);

/// Snaps near-integer frame positions so on-grid times return stored frames
/// unchanged.
double frame_position(const MotionClip& clip, double t);

/// Interpolated pose at time `t` (clamped to the clip): linear root position
/// and offsets, slerp rotations.
PoseFrame sample_clip(const MotionClip& clip, double t);

/// Blend of two frames of the same skeleton, `alpha` in [0, 1].
PoseFrame interpolate_frames(const Skeleton& skeleton, const PoseFrame& a, const PoseFrame& b,
                             double alpha);

/// Looks up a joint by name in a world pose.
const JointPose* find_joint(const WorldPose& pose, std::string_view name);

}  // namespace motionguide

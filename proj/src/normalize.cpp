#include "motionguide/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "motionguide/error.hpp"

namespace motionguide {

CanonicalPose retarget(const WorldPose& pose, const JointMapTable& map) {
    CanonicalPose out;
    for (const auto& [src, dst] : map.pairs) {
        const auto target = canonical_joint(dst);
        if (!target) throw RetargetError("map target '" + dst + "' is not a canonical joint");
        if (const JointPose* jp = find_joint(pose, src)) {
            JointPose copy = *jp;
            copy.name = dst;
            out[*target] = std::move(copy);
        } else if (map.is_required(dst)) {
            throw RetargetError("required source joint '" + src + "' (for '" + dst + "') is missing");
        }
    }
    return out;
}

namespace {

const Vec3& require(const CanonicalPose& pose, CanonicalJoint j) {
    if (!pose[j]) throw NormalizeError("normalization needs joint '" + std::string(name_of(j)) + "'");
    return pose[j]->position;
}

}  // namespace

double vertical_span(const CanonicalPose& pose) {
    const Vec3& head = require(pose, CanonicalJoint::Head);
    const Vec3& la = require(pose, CanonicalJoint::LeftAnkle);
    const Vec3& ra = require(pose, CanonicalJoint::RightAnkle);
    return head.y - 0.5 * (la.y + ra.y);
}

namespace {

NormalizedPose normalize_with_scale(const CanonicalPose& pose, double scale) {
    const Vec3 pelvis = require(pose, CanonicalJoint::Pelvis);
    const Vec3 hip_line = require(pose, CanonicalJoint::RightHip) - require(pose, CanonicalJoint::LeftHip);
    Vec3 facing = kUp.cross(hip_line);
    facing.y = 0.0;
    if (facing.norm() < 1e-9) throw NormalizeError("hip line is vertical or degenerate; facing undefined");
    const double yaw = std::atan2(facing.x, facing.z);
    const Quat unyaw = Quat::from_yaw(-yaw);

    NormalizedPose out;
    out.facing = Quat::from_yaw(yaw);
    out.height_scale = scale;
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i)
        if (pose.joints[i]) out.positions[i] = unyaw.rotate(pose.joints[i]->position - pelvis) / scale;
    return out;
}

constexpr double kMinSpan = 0.01;

}  // namespace

NormalizedPose normalize(const CanonicalPose& pose) {
    const double span = vertical_span(pose);
    if (!(span > kMinSpan))
        throw NormalizeError("degenerate body: vertical span " + std::to_string(span) + " m");
    return normalize_with_scale(pose, span);
}

NormalizedPose normalize(const CanonicalPose& pose, double reference_span) {
    const double scale = std::max(vertical_span(pose), reference_span);
    if (!(scale > kMinSpan))
        throw NormalizeError("degenerate body: vertical span " + std::to_string(scale) + " m");
    return normalize_with_scale(pose, scale);
}

double SpanTracker::observe(double span) {
    sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), span), span);
    return reference();
}

double SpanTracker::reference() const {
    if (sorted_.empty()) return 0.0;
    const auto n = static_cast<double>(sorted_.size());
    auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted_.size());
    return sorted_[rank - 1];
}

NormalizedPose PosePipeline::push(const WorldPose& pose) {
    const CanonicalPose canonical = retarget(pose, map_);
    const double reference = spans_.observe(vertical_span(canonical));
    return normalize(canonical, reference);
}

std::vector<NormalizedPose> normalize_clip(const MotionClip& clip, const JointMapTable& map) {
    PosePipeline pipeline(map);
    std::vector<NormalizedPose> out;
    out.reserve(clip.frame_count());
    for (std::size_t k = 0; k < clip.frame_count(); ++k) {
        try {
            out.push_back(pipeline.push(forward_kinematics(clip.skeleton(), clip.frames()[k])));
        } catch (const Error& e) {
            throw NormalizeError("frame " + std::to_string(k) + ": " + e.what());
        }
    }
    return out;
}

MotionClip resample(const MotionClip& clip, double target_fps) {
    if (!(target_fps > 0.0) || !std::isfinite(target_fps)) throw DomainError("target fps must be positive");
    const double duration = clip_duration(clip);
    const auto count = static_cast<std::size_t>(std::llround(duration * target_fps)) + 1;
    std::vector<PoseFrame> frames;
    frames.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        frames.push_back(sample_clip(clip, static_cast<double>(k) / target_fps));
    return MotionClip(clip.skeleton(), std::move(frames), target_fps);
}

}  // namespace motionguide

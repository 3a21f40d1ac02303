#include "motionguide/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "motionguide/error.hpp"

namespace motionguide {

Skeleton::Skeleton(std::vector<Joint> joints) : joints_(std::move(joints)) {
    if (joints_.size() < 2) throw StructuralError("skeleton needs at least 2 joints");
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < joints_.size(); ++i) {
        const Joint& j = joints_[i];
        if (j.name.empty()) throw StructuralError("joint " + std::to_string(i) + " has no name");
        if (!names.insert(j.name).second) throw StructuralError("duplicate joint name '" + j.name + "'");
        if (!j.offset.is_finite()) throw StructuralError("joint '" + j.name + "' has a non-finite offset");
        if (i == 0) {
            if (j.parent) throw StructuralError("first joint '" + j.name + "' must be the root");
            continue;
        }
        if (!j.parent) throw StructuralError("joint '" + j.name + "' is a second root");
        if (*j.parent >= i)
            throw StructuralError("joint '" + j.name + "' is not in topological order (cyclic or forward parent)");
        if (!(j.offset.norm() > 0.0)) throw StructuralError("joint '" + j.name + "' has a zero-length bone");
    }
}

std::optional<std::size_t> Skeleton::find(std::string_view name) const {
    for (std::size_t i = 0; i < joints_.size(); ++i)
        if (joints_[i].name == name) return i;
    return std::nullopt;
}

std::size_t Skeleton::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw StructuralError("unknown joint '" + std::string(name) + "'");
}

Vec3 effective_offset(const Skeleton& skeleton, const PoseFrame& frame, std::size_t joint) {
    if (!frame.joint_offsets.empty() && joint != 0) return frame.joint_offsets[joint];
    return skeleton[joint].offset;
}

namespace {

void check_frame(const Skeleton& skeleton, const PoseFrame& frame) {
    if (frame.joint_rotations.size() != skeleton.size())
        throw StructuralError("frame has " + std::to_string(frame.joint_rotations.size()) +
                              " rotations for a " + std::to_string(skeleton.size()) + "-joint skeleton");
    if (!frame.joint_offsets.empty() && frame.joint_offsets.size() != skeleton.size())
        throw StructuralError("frame offset overrides not sized to the skeleton");
}

}  // namespace

WorldPose forward_kinematics(const Skeleton& skeleton, const PoseFrame& frame) {
    check_frame(skeleton, frame);
    WorldPose out(skeleton.size());
    for (std::size_t i = 0; i < skeleton.size(); ++i) {
        const Joint& j = skeleton[i];
        out[i].name = j.name;
        if (!j.parent) {
            out[i].position = frame.root_position;
            out[i].rotation = frame.joint_rotations[i].normalized();
            continue;
        }
        const JointPose& p = out[*j.parent];
        out[i].position = p.position + p.rotation.rotate(effective_offset(skeleton, frame, i));
        out[i].rotation = (p.rotation * frame.joint_rotations[i]).normalized();
    }
    return out;
}

MotionClip::MotionClip(Skeleton skeleton, std::vector<PoseFrame> frames, double fps)
    : skeleton_(std::move(skeleton)), frames_(std::move(frames)), fps_(fps) {
    if (!(std::isfinite(fps_) && fps_ > 0.0)) throw DomainError("clip fps must be finite and positive");
    if (frames_.empty()) throw StructuralError("clip needs at least one frame");
    for (const PoseFrame& f : frames_) check_frame(skeleton_, f);
}

double clip_duration(const MotionClip& clip) {
    return static_cast<double>(clip.frame_count() - 1) / clip.fps();
}

double frame_position(const MotionClip& clip, double t) {
    const double last = static_cast<double>(clip.frame_count() - 1);
    double u = t * clip.fps();
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < 1e-6) u = nearest;
    return std::clamp(u, 0.0, last);
}

PoseFrame interpolate_frames(const Skeleton& skeleton, const PoseFrame& a, const PoseFrame& b,
                             double alpha) {
    if (alpha <= 0.0) return a;
    if (alpha >= 1.0) return b;
    PoseFrame out;
    out.root_position = lerp(a.root_position, b.root_position, alpha);
    out.joint_rotations.resize(a.joint_rotations.size());
    for (std::size_t i = 0; i < a.joint_rotations.size(); ++i)
        out.joint_rotations[i] = slerp(a.joint_rotations[i], b.joint_rotations[i], alpha);
    if (!a.joint_offsets.empty() || !b.joint_offsets.empty()) {
        out.joint_offsets.resize(skeleton.size());
        for (std::size_t i = 1; i < skeleton.size(); ++i)
            out.joint_offsets[i] =
                lerp(effective_offset(skeleton, a, i), effective_offset(skeleton, b, i), alpha);
    }
    return out;
}

PoseFrame sample_clip(const MotionClip& clip, double t) {
    const double u = frame_position(clip, t);
    const auto i0 = static_cast<std::size_t>(std::floor(u));
    const double alpha = u - static_cast<double>(i0);
    if (alpha == 0.0 || i0 + 1 >= clip.frame_count()) return clip.frames()[i0];
    return interpolate_frames(clip.skeleton(), clip.frames()[i0], clip.frames()[i0 + 1], alpha);
}

const JointPose* find_joint(const WorldPose& pose, std::string_view name) {
    auto it = std::find_if(pose.begin(), pose.end(), [&](const JointPose& j) { return j.name == name; });
    return it == pose.end() ? nullptr : &*it;
}

}  // namespace motionguide

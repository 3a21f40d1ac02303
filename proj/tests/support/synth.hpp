#pragma once

// Synthetic motion shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "motionguide/builtin.hpp"
#include "motionguide/skeleton.hpp"

namespace synth {

namespace mg = motionguide;

inline mg::Quat axis_angle(const mg::Vec3& axis, double angle) { return mg::Quat::from_axis_angle(axis, angle); }

/// Canonical-skeleton pose driven by a scalar phase. Every joint channel uses
/// an incommensurate frequency so distinct phases give distinct poses.
inline mg::PoseFrame exercise_pose(double s) {
    const auto& skel = mg::canonical_skeleton();
    mg::PoseFrame f;
    f.root_position = {0.3 * std::sin(0.11 * s), 0.95, 0.2 * std::sin(0.05 * s)};
    f.joint_rotations.assign(skel.size(), mg::Quat{});
    auto set = [&](const char* name, const mg::Quat& q) { f.joint_rotations[skel.index_of(name)] = q; };
    const mg::Vec3 X{1, 0, 0}, Y{0, 1, 0}, Z{0, 0, 1};
    set("pelvis", axis_angle(Y, 0.5 * std::sin(0.07 * s)));
    set("spine", axis_angle(Y, 0.3 * std::sin(0.19 * s)));
    set("chest", axis_angle(X, 0.2 * std::sin(0.23 * s)));
    set("head", axis_angle(Y, 0.4 * std::sin(0.17 * s)));
    set("left_shoulder", axis_angle(Z, 0.9 * std::sin(0.41 * s)));
    set("right_shoulder", axis_angle(Z, -0.9 * std::sin(0.29 * s + 1.0)));
    set("left_elbow", axis_angle(Y, -1.2 * std::pow(std::sin(0.53 * s), 2)));
    set("right_elbow", axis_angle(Y, 1.0 * std::pow(std::sin(0.37 * s), 2)));
    set("left_hip", axis_angle(X, -0.6 * std::sin(0.47 * s)));
    set("right_hip", axis_angle(X, -0.6 * std::sin(0.31 * s + 2.0)));
    set("left_knee", axis_angle(X, 0.8 * std::pow(std::sin(0.43 * s), 2)));
    set("right_knee", axis_angle(X, 0.8 * std::pow(std::sin(0.61 * s), 2)));
    return f;
}

/// Phase that comes to rest at every multiple of `period` seconds.
inline double eased_phase(double t, double period = 2.0) {
    const double w = 2.0 * mg::kPi / period;
    return t - std::sin(w * t) / w;
}

/// Exercise clip sampled at k / fps for `seconds` (inclusive end).
inline mg::MotionClip exercise_clip(double seconds, double fps = 30.0, double period = 2.0) {
    const auto n = static_cast<std::size_t>(std::llround(seconds * fps)) + 1;
    std::vector<mg::PoseFrame> frames;
    frames.reserve(n);
    for (std::size_t k = 0; k < n; ++k) frames.push_back(exercise_pose(eased_phase(k / fps, period)));
    return mg::MotionClip(mg::canonical_skeleton(), std::move(frames), fps);
}

/// The first frame of `clip` held for its whole length.
inline mg::MotionClip frozen_clip(const mg::MotionClip& clip) {
    std::vector<mg::PoseFrame> frames(clip.frame_count(), clip.frames().front());
    return mg::MotionClip(clip.skeleton(), std::move(frames), clip.fps());
}

/// Rest pose on the canonical skeleton (T-pose at the rest root).
inline mg::PoseFrame rest_pose() {
    mg::PoseFrame f;
    f.root_position = mg::canonical_rest_root();
    f.joint_rotations.assign(mg::canonical_skeleton().size(), mg::Quat{});
    return f;
}

inline mg::MotionClip constant_clip(const mg::PoseFrame& pose, std::size_t frames, double fps = 30.0) {
    return mg::MotionClip(mg::canonical_skeleton(), std::vector<mg::PoseFrame>(frames, pose), fps);
}

inline mg::Quat random_rotation(std::mt19937& rng, double max_angle) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-max_angle, max_angle);
    mg::Vec3 axis{n(rng), n(rng), n(rng)};
    if (axis.norm() < 1e-9) axis = {0, 1, 0};
    return mg::Quat::from_axis_angle(axis.normalized(), u(rng));
}

/// Random but anatomically loose pose: moderate joint rotations, the pelvis
/// turned about the vertical and tilted a little.
inline mg::PoseFrame random_pose(std::mt19937& rng) {
    const auto& skel = mg::canonical_skeleton();
    std::uniform_real_distribution<double> pos(-2.0, 2.0), yaw(-mg::kPi, mg::kPi);
    mg::PoseFrame f;
    f.root_position = {pos(rng), 0.95, pos(rng)};
    f.joint_rotations.resize(skel.size());
    for (std::size_t j = 0; j < skel.size(); ++j) f.joint_rotations[j] = random_rotation(rng, 0.8);
    f.joint_rotations[0] = mg::Quat::from_yaw(yaw(rng)) * random_rotation(rng, 0.15);
    return f;
}

/// Applies p -> R_yaw (scale p) + offset to every joint of a world pose.
inline mg::WorldPose transform_pose(const mg::WorldPose& pose, double scale, double yaw, const mg::Vec3& offset) {
    const mg::Quat r = mg::Quat::from_yaw(yaw);
    mg::WorldPose out = pose;
    for (auto& j : out) {
        j.position = r.rotate(j.position * scale) + offset;
        j.rotation = r * j.rotation;
    }
    return out;
}

}  // namespace synth

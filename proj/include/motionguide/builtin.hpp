#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "motionguide/skeleton.hpp"

namespace motionguide {

/// The 20-joint body model every comparison runs on.
enum class CanonicalJoint : std::size_t {
    Pelvis,
    Spine,
    Chest,
    Neck,
    Head,
    Nose,
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftWrist,
    RightWrist,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftAnkle,
    RightAnkle,
    LeftFoot,
    RightFoot,
};

inline constexpr std::size_t kCanonicalJointCount = 20;

inline constexpr std::array<std::string_view, kCanonicalJointCount> kCanonicalJointNames = {
    "pelvis",     "spine",       "chest",      "neck",        "head",
    "nose",       "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip",   "right_hip",   "left_knee",
    "right_knee", "left_ankle",  "right_ankle", "left_foot",  "right_foot",
};

constexpr std::size_t index(CanonicalJoint j) { return static_cast<std::size_t>(j); }
constexpr std::string_view name_of(CanonicalJoint j) { return kCanonicalJointNames[index(j)]; }
std::optional<CanonicalJoint> canonical_joint(std::string_view name);

/// Canonical rig in a T-pose: pelvis 0.95 m above ground, facing +Z, the
/// performer's left side on +X.
const Skeleton& canonical_skeleton();
/// Rest root position matching `canonical_skeleton()`.
Vec3 canonical_rest_root();

/// Azure Kinect body-tracking hierarchy (32 joints, upper-case names).
const Skeleton& kinect32_skeleton();

/// Built-in skeleton by id ("canonical20", "kinect32").
std::optional<Skeleton> builtin_skeleton(std::string_view id);

/// Text of the shipped kinect32 -> canonical20 joint map.
std::string_view default_kinect_map_json();

}  // namespace motionguide

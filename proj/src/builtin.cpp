#include "motionguide/builtin.hpp"

#include <utility>

namespace motionguide {

std::optional<CanonicalJoint> canonical_joint(std::string_view name) {
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i)
        if (kCanonicalJointNames[i] == name) return static_cast<CanonicalJoint>(i);
    return std::nullopt;
}

namespace {

Joint make(std::string name, std::optional<std::size_t> parent, Vec3 offset) {
    return Joint{std::move(name), parent, offset, std::nullopt};
}

Skeleton build_canonical() {
    // Depth-first order, so a BVH round trip keeps the indices.
    std::vector<Joint> j;
    j.push_back(make("pelvis", std::nullopt, {0, 0, 0}));      // 0
    j.push_back(make("spine", 0, {0, 0.10, 0}));               // 1
    j.push_back(make("chest", 1, {0, 0.20, 0}));               // 2
    j.push_back(make("neck", 2, {0, 0.20, 0}));                // 3
    j.push_back(make("head", 3, {0, 0.10, 0}));                // 4
    j.push_back(make("nose", 4, {0, 0.08, 0.10}));             // 5
    j.push_back(make("left_shoulder", 2, {0.18, 0.15, 0}));    // 6
    j.push_back(make("left_elbow", 6, {0.28, 0, 0}));          // 7
    j.push_back(make("left_wrist", 7, {0.25, 0, 0}));          // 8
    j.push_back(make("right_shoulder", 2, {-0.18, 0.15, 0}));  // 9
    j.push_back(make("right_elbow", 9, {-0.28, 0, 0}));        // 10
    j.push_back(make("right_wrist", 10, {-0.25, 0, 0}));       // 11
    j.push_back(make("left_hip", 0, {0.10, -0.05, 0}));        // 12
    j.push_back(make("left_knee", 12, {0, -0.42, 0}));         // 13
    j.push_back(make("left_ankle", 13, {0, -0.40, 0}));        // 14
    j.push_back(make("left_foot", 14, {0, -0.05, 0.12}));      // 15
    j.push_back(make("right_hip", 0, {-0.10, -0.05, 0}));      // 16
    j.push_back(make("right_knee", 16, {0, -0.42, 0}));        // 17
    j.push_back(make("right_ankle", 17, {0, -0.40, 0}));       // 18
    j.push_back(make("right_foot", 18, {0, -0.05, 0.12}));     // 19
    j[5].end_site = Vec3{0, 0, 0.05};
    j[8].end_site = Vec3{0.08, 0, 0};
    j[11].end_site = Vec3{-0.08, 0, 0};
    j[15].end_site = Vec3{0, 0, 0.08};
    j[19].end_site = Vec3{0, 0, 0.08};
    return Skeleton(std::move(j));
}

Skeleton build_kinect32() {
    std::vector<Joint> j;
    j.push_back(make("PELVIS", std::nullopt, {0, 0, 0}));                 // 0
    j.push_back(make("SPINE_NAVEL", 0, {0, 0.12, 0}));                    // 1
    j.push_back(make("SPINE_CHEST", 1, {0, 0.18, 0}));                    // 2
    j.push_back(make("NECK", 2, {0, 0.20, 0}));                           // 3
    j.push_back(make("CLAVICLE_LEFT", 2, {0.04, 0.15, 0}));               // 4
    j.push_back(make("SHOULDER_LEFT", 4, {0.14, 0, 0}));                  // 5
    j.push_back(make("ELBOW_LEFT", 5, {0.28, 0, 0}));                     // 6
    j.push_back(make("WRIST_LEFT", 6, {0.25, 0, 0}));                     // 7
    j.push_back(make("HAND_LEFT", 7, {0.08, 0, 0}));                      // 8
    j.push_back(make("HANDTIP_LEFT", 8, {0.07, 0, 0}));                   // 9
    j.push_back(make("THUMB_LEFT", 7, {0.05, 0, 0.04}));                  // 10
    j.push_back(make("CLAVICLE_RIGHT", 2, {-0.04, 0.15, 0}));             // 11
    j.push_back(make("SHOULDER_RIGHT", 11, {-0.14, 0, 0}));               // 12
    j.push_back(make("ELBOW_RIGHT", 12, {-0.28, 0, 0}));                  // 13
    j.push_back(make("WRIST_RIGHT", 13, {-0.25, 0, 0}));                  // 14
    j.push_back(make("HAND_RIGHT", 14, {-0.08, 0, 0}));                   // 15
    j.push_back(make("HANDTIP_RIGHT", 15, {-0.07, 0, 0}));                // 16
    j.push_back(make("THUMB_RIGHT", 14, {-0.05, 0, 0.04}));               // 17
    j.push_back(make("HIP_LEFT", 0, {0.10, -0.05, 0}));                   // 18
    j.push_back(make("KNEE_LEFT", 18, {0, -0.42, 0}));                    // 19
    j.push_back(make("ANKLE_LEFT", 19, {0, -0.40, 0}));                   // 20
    j.push_back(make("FOOT_LEFT", 20, {0, -0.05, 0.12}));                 // 21
    j.push_back(make("HIP_RIGHT", 0, {-0.10, -0.05, 0}));                 // 22
    j.push_back(make("KNEE_RIGHT", 22, {0, -0.42, 0}));                   // 23
    j.push_back(make("ANKLE_RIGHT", 23, {0, -0.40, 0}));                  // 24
    j.push_back(make("FOOT_RIGHT", 24, {0, -0.05, 0.12}));                // 25
    j.push_back(make("HEAD", 3, {0, 0.10, 0}));                           // 26
    j.push_back(make("NOSE", 26, {0, 0.08, 0.10}));                       // 27
    j.push_back(make("EYE_LEFT", 26, {0.03, 0.11, 0.08}));                // 28
    j.push_back(make("EAR_LEFT", 26, {0.07, 0.09, 0}));                   // 29
    j.push_back(make("EYE_RIGHT", 26, {-0.03, 0.11, 0.08}));              // 30
    j.push_back(make("EAR_RIGHT", 26, {-0.07, 0.09, 0}));                 // 31
    return Skeleton(std::move(j));
}

constexpr std::string_view kDefaultKinectMap = R"({
  "source": "kinect32",
  "target": "canonical20",
  "pairs": [
    ["PELVIS", "pelvis"],
    ["SPINE_NAVEL", "spine"],
    ["SPINE_CHEST", "chest"],
    ["NECK", "neck"],
    ["HEAD", "head"],
    ["NOSE", "nose"],
    ["SHOULDER_LEFT", "left_shoulder"],
    ["SHOULDER_RIGHT", "right_shoulder"],
    ["ELBOW_LEFT", "left_elbow"],
    ["ELBOW_RIGHT", "right_elbow"],
    ["WRIST_LEFT", "left_wrist"],
    ["WRIST_RIGHT", "right_wrist"],
    ["HIP_LEFT", "left_hip"],
    ["HIP_RIGHT", "right_hip"],
    ["KNEE_LEFT", "left_knee"],
    ["KNEE_RIGHT", "right_knee"],
    ["ANKLE_LEFT", "left_ankle"],
    ["ANKLE_RIGHT", "right_ankle"],
    ["FOOT_LEFT", "left_foot"],
    ["FOOT_RIGHT", "right_foot"]
  ],
  "required": [
    "pelvis", "spine", "chest", "neck", "head",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip", "right_hip",
    "left_knee", "right_knee", "left_ankle", "right_ankle",
    "left_foot", "right_foot"
  ]
}
)";

}  // namespace

const Skeleton& canonical_skeleton() {
    static const Skeleton s = build_canonical();
    return s;
}

Vec3 canonical_rest_root() { return {0.0, 0.95, 0.0}; }

const Skeleton& kinect32_skeleton() {
    static const Skeleton s = build_kinect32();
    return s;
}

std::optional<Skeleton> builtin_skeleton(std::string_view id) {
    if (id == "canonical20") return canonical_skeleton();
    if (id == "kinect32") return kinect32_skeleton();
    return std::nullopt;
}

std::string_view default_kinect_map_json() { return kDefaultKinectMap; }

}  // namespace motionguide

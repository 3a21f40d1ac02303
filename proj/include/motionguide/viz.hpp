#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "motionguide/compare.hpp"
#include "motionguide/skeleton.hpp"

namespace motionguide {

struct Rgba {
    double r = 0.0, g = 0.0, b = 0.0, a = 1.0;
    bool operator==(const Rgba&) const = default;
};

inline constexpr Rgba kFootprintBlue{0.0, 0.0, 1.0, 1.0};

struct TrajectoryPoint {
    Vec3 position;
    double alpha = 1.0;
    double t = 0.0;
};

struct TrajectoryPolyline {
    std::string joint;
    std::vector<TrajectoryPoint> points;  ///< oldest first
};

/// Recent path of one joint: every frame in [max(0, t - window), t], alpha
/// ramping 0 -> 1 from oldest to newest. Throws VizError for an unknown joint
/// or `t` outside the clip.
TrajectoryPolyline trajectory(const MotionClip& clip, std::string_view joint, double t, double window = 1.5);

enum class Foot { Left, Right };

struct FootprintMarker {
    Foot foot = Foot::Left;
    Vec3 position;  ///< on the ground plane, y = 0
    double yaw = 0.0;
    double born_t = 0.0;
    double alpha = 1.0;
    Rgba color = kFootprintBlue;
};

struct FootprintOptions {
    double interval = 2.0;
    double fade = 4.0;
    std::string left_joint = "left_foot";
    std::string right_joint = "right_foot";
};

/// Periodic foot captures born at 0, interval, 2 interval, ... <= t, faded
/// linearly over `fade` seconds; fully faded markers are dropped. Yaw is the
/// root's heading at birth.
std::vector<FootprintMarker> footprints(const MotionClip& clip, double t, const FootprintOptions& options = {});

struct GazeRay {
    Vec3 origin;
    Vec3 direction;  ///< unit
    double length = 2.0;

    Vec3 endpoint() const { return origin + direction * length; }
};

/// Ray from the head along its rotated forward (+Z) axis. Throws VizError
/// when `head_joint` is absent.
GazeRay head_gaze(const WorldPose& pose, double length = 2.0, std::string_view head_joint = "head");

enum class AnchorMode { TranslationOnly, TranslationPlusYaw };
std::string_view name_of(AnchorMode mode);

struct HeadPose {
    Vec3 position;
    Quat rotation;
};

struct FirstPersonAnchor {
    RigidTransform transform;  ///< avatar space -> user space
    AnchorMode mode = AnchorMode::TranslationOnly;
};

/// Places the avatar so its head lands on the user's head; the yaw mode also
/// turns it about the vertical axis to share the user's heading.
FirstPersonAnchor first_person_anchor(const HeadPose& user_head, const HeadPose& avatar_head,
                                      AnchorMode mode = AnchorMode::TranslationOnly);

struct PolylinePrimitive {
    std::vector<TrajectoryPoint> points;
    std::string label;
};
struct GroundDiscPrimitive {
    Vec3 center;
    double radius = 0.12;
    double yaw = 0.0;
    std::string label;
};
struct RayPrimitive {
    Vec3 origin;
    Vec3 direction;
    double length = 2.0;
};
struct IndicatorSpherePrimitive {
    std::string joint;
    IndicatorColor color = IndicatorColor::Blue;
    Vec3 center;
    double radius = 0.06;
};

struct ScenePrimitive {
    std::variant<PolylinePrimitive, GroundDiscPrimitive, RayPrimitive, IndicatorSpherePrimitive> shape;
    Rgba rgba;
    double t = 0.0;
};

Rgba indicator_rgba(IndicatorColor color);

ScenePrimitive to_primitive(const TrajectoryPolyline& path, double t, Rgba rgba = {1.0, 0.6, 0.0, 1.0});
ScenePrimitive to_primitive(const FootprintMarker& marker, double t);
ScenePrimitive to_primitive(const GazeRay& ray, double t, Rgba rgba = {1.0, 1.0, 0.0, 1.0});
ScenePrimitive indicator_sphere(std::string_view joint, IndicatorColor color, const Vec3& center, double t);

/// Deterministic JSON array with fixed field order and 6-decimal reals.
std::string export_scene(const std::vector<ScenePrimitive>& primitives);
/// Appends the array to an existing writer (used by session logs).
void write_scene(class JsonWriter& w, const std::vector<ScenePrimitive>& primitives);

}  // namespace motionguide

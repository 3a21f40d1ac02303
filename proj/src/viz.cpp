#include "motionguide/viz.hpp"

#include <cmath>

#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

namespace {

void check_time(const MotionClip& clip, double t) {
    const double duration = clip_duration(clip);
    if (!(t >= -1e-9 && t <= duration + 1e-9))
        throw VizError("time " + format_fixed(t, 3) + " s outside clip [0, " + format_fixed(duration, 3) + "]");
}

std::size_t joint_index(const MotionClip& clip, std::string_view joint) {
    if (auto i = clip.skeleton().find(joint)) return *i;
    throw VizError("clip has no joint '" + std::string(joint) + "'");
}

}  // namespace

TrajectoryPolyline trajectory(const MotionClip& clip, std::string_view joint, double t, double window) {
    if (!(window >= 0.0)) throw VizError("trajectory window must be non-negative");
    const std::size_t j = joint_index(clip, joint);
    check_time(clip, t);
    const double fps = clip.fps();
    const auto last = static_cast<long long>(clip.frame_count()) - 1;
    const long long end = std::min(last, static_cast<long long>(std::floor(t * fps + 1e-9)));
    const long long begin = std::max(0LL, static_cast<long long>(std::ceil((t - window) * fps - 1e-9)));

    TrajectoryPolyline out;
    out.joint = std::string(joint);
    const long long n = end - begin + 1;
    for (long long k = begin; k <= end; ++k) {
        const auto frame = static_cast<std::size_t>(k);
        const WorldPose pose = forward_kinematics(clip.skeleton(), clip.frames()[frame]);
        const double alpha = n == 1 ? 1.0 : static_cast<double>(k - begin) / static_cast<double>(n - 1);
        out.points.push_back({pose[j].position, alpha, static_cast<double>(k) / fps});
    }
    return out;
}

std::vector<FootprintMarker> footprints(const MotionClip& clip, double t, const FootprintOptions& options) {
    if (!(options.interval > 0.0)) throw VizError("footprint interval must be positive");
    if (!(options.fade > 0.0)) throw VizError("footprint fade must be positive");
    check_time(clip, t);
    const std::size_t left = joint_index(clip, options.left_joint);
    const std::size_t right = joint_index(clip, options.right_joint);

    std::vector<FootprintMarker> out;
    for (std::size_t m = 0;; ++m) {
        const double born = static_cast<double>(m) * options.interval;
        if (born > t + 1e-9) break;
        const double age = t - born;
        const double alpha = std::clamp(1.0 - age / options.fade, 0.0, 1.0);
        if (alpha <= 0.0) continue;
        const WorldPose pose = forward_kinematics(clip.skeleton(), sample_clip(clip, born));
        const double yaw = pose[0].rotation.yaw();
        for (auto [foot, idx] : {std::pair{Foot::Left, left}, std::pair{Foot::Right, right}}) {
            FootprintMarker marker;
            marker.foot = foot;
            marker.position = {pose[idx].position.x, 0.0, pose[idx].position.z};
            marker.yaw = yaw;
            marker.born_t = born;
            marker.alpha = alpha;
            out.push_back(marker);
        }
    }
    return out;
}

GazeRay head_gaze(const WorldPose& pose, double length, std::string_view head_joint) {
    const JointPose* head = find_joint(pose, head_joint);
    if (!head) throw VizError("pose has no head joint '" + std::string(head_joint) + "'");
    return {head->position, head->rotation.rotate(kForward).normalized(), length};
}

std::string_view name_of(AnchorMode mode) {
    return mode == AnchorMode::TranslationOnly ? "translation_only" : "translation_plus_yaw";
}

FirstPersonAnchor first_person_anchor(const HeadPose& user_head, const HeadPose& avatar_head, AnchorMode mode) {
    FirstPersonAnchor a;
    a.mode = mode;
    if (mode == AnchorMode::TranslationPlusYaw)
        a.transform.rotation = Quat::from_yaw(user_head.rotation.yaw() - avatar_head.rotation.yaw());
    a.transform.translation = user_head.position - a.transform.rotation.rotate(avatar_head.position);
    return a;
}

Rgba indicator_rgba(IndicatorColor color) {
    switch (color) {
        case IndicatorColor::Blue: return {0.0, 0.4, 1.0, 1.0};
        case IndicatorColor::Yellow: return {1.0, 0.85, 0.0, 1.0};
        case IndicatorColor::Red: return {1.0, 0.0, 0.0, 1.0};
    }
    return {};
}

ScenePrimitive to_primitive(const TrajectoryPolyline& path, double t, Rgba rgba) {
    return {PolylinePrimitive{path.points, path.joint}, rgba, t};
}

ScenePrimitive to_primitive(const FootprintMarker& marker, double t) {
    Rgba rgba = marker.color;
    rgba.a *= marker.alpha;
    return {GroundDiscPrimitive{marker.position, 0.12, marker.yaw,
                                marker.foot == Foot::Left ? "left_foot" : "right_foot"},
            rgba, t};
}

ScenePrimitive to_primitive(const GazeRay& ray, double t, Rgba rgba) {
    return {RayPrimitive{ray.origin, ray.direction, ray.length}, rgba, t};
}

ScenePrimitive indicator_sphere(std::string_view joint, IndicatorColor color, const Vec3& center, double t) {
    return {IndicatorSpherePrimitive{std::string(joint), color, center, 0.06}, indicator_rgba(color), t};
}

namespace {

struct PrimitiveWriter {
    JsonWriter& w;

    void operator()(const PolylinePrimitive& p) const {
        w.field("type", "polyline").field("label", std::string_view(p.label)).key("points").begin_array();
        for (const auto& pt : p.points)
            w.begin_object().field("p", pt.position).field("alpha", pt.alpha).field("t", pt.t).end_object();
        w.end_array();
    }
    void operator()(const GroundDiscPrimitive& d) const {
        w.field("type", "ground_disc")
            .field("label", std::string_view(d.label))
            .field("center", d.center)
            .field("radius", d.radius)
            .field("yaw", d.yaw);
    }
    void operator()(const RayPrimitive& r) const {
        w.field("type", "ray").field("origin", r.origin).field("direction", r.direction).field("length", r.length);
    }
    void operator()(const IndicatorSpherePrimitive& s) const {
        w.field("type", "indicator_sphere")
            .field("joint", std::string_view(s.joint))
            .field("color", name_of(s.color))
            .field("center", s.center)
            .field("radius", s.radius);
    }
};

}  // namespace

void write_scene(JsonWriter& w, const std::vector<ScenePrimitive>& primitives) {
    w.begin_array();
    for (const auto& p : primitives) {
        w.begin_object();
        std::visit(PrimitiveWriter{w}, p.shape);
        w.key("rgba").begin_array().value(p.rgba.r).value(p.rgba.g).value(p.rgba.b).value(p.rgba.a).end_array();
        w.field("t", p.t);
        w.end_object();
    }
    w.end_array();
}

std::string export_scene(const std::vector<ScenePrimitive>& primitives) {
    JsonWriter w;
    write_scene(w, primitives);
    return w.take();
}

}  // namespace motionguide

#include "motionguide/config.hpp"

#include <initializer_list>

#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view what, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (auto key : keys) known = known || key == k;
        if (!known) throw ValidationError(std::string(what) + ": unknown key '" + k + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view what) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) throw ValidationError("");
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!it->is_number()) throw ValidationError("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) throw ValidationError("");
        }
        out = it->get<T>();
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + ": '" + key + "' has the wrong type");
    }
}

}  // namespace

json parse_config_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("config is not valid JSON: ") + e.what());
    }
}

CompareConfig compare_config_from_json(const json& j) {
    require_object(j, "compare", {"scored_joints", "d_max", "limb_blue", "limb_yellow", "smoothing_window"});
    CompareConfig c;
    if (auto it = j.find("scored_joints"); it != j.end()) {
        if (!it->is_array()) throw ValidationError("compare: 'scored_joints' must be an array");
        c.scored_joints.clear();
        for (const auto& name : *it) {
            if (!name.is_string()) throw ValidationError("compare: joint names must be strings");
            auto joint = canonical_joint(name.get<std::string>());
            if (!joint) throw ValidationError("compare: unknown joint '" + name.get<std::string>() + "'");
            c.scored_joints.push_back(*joint);
        }
    }
    read(j, "d_max", c.d_max, "compare");
    read(j, "limb_blue", c.limb_blue, "compare");
    read(j, "limb_yellow", c.limb_yellow, "compare");
    read(j, "smoothing_window", c.smoothing_window, "compare");
    validate(c);
    return c;
}

NavConfig nav_config_from_json(const json& j) {
    require_object(j, "nav", {"preset", "threshold", "step_seconds", "hold_frames", "use_smoothed"});
    NavConfig c;
    if (auto it = j.find("preset"); it != j.end()) {
        const std::string p = it->is_string() ? it->get<std::string>() : "";
        if (p == "high_accuracy")
            c = NavConfig::high_accuracy();
        else if (p == "fine")
            c = NavConfig::fine();
        else if (p == "coarse")
            c = NavConfig::coarse();
        else
            throw ValidationError("nav: unknown preset '" + p + "'");
    }
    read(j, "threshold", c.threshold, "nav");
    read(j, "step_seconds", c.step_seconds, "nav");
    read(j, "hold_frames", c.hold_frames, "nav");
    read(j, "use_smoothed", c.use_smoothed, "nav");
    validate(c);
    return c;
}

QualityConfig quality_config_from_json(const json& j) {
    require_object(j, "quality",
                   {"bone_length_tolerance", "max_joint_speed", "max_root_jump", "ground_penetration",
                    "limb_proximity_min", "foot_joints", "left_elbow", "left_wrist", "right_elbow", "right_wrist"});
    QualityConfig c;
    read(j, "bone_length_tolerance", c.bone_length_tolerance, "quality");
    read(j, "max_joint_speed", c.max_joint_speed, "quality");
    read(j, "max_root_jump", c.max_root_jump, "quality");
    read(j, "ground_penetration", c.ground_penetration, "quality");
    read(j, "limb_proximity_min", c.limb_proximity_min, "quality");
    if (auto it = j.find("foot_joints"); it != j.end()) {
        if (!it->is_array()) throw ValidationError("quality: 'foot_joints' must be an array");
        c.foot_joints.clear();
        for (const auto& n : *it) {
            if (!n.is_string()) throw ValidationError("quality: joint names must be strings");
            c.foot_joints.push_back(n.get<std::string>());
        }
    }
    read(j, "left_elbow", c.left_elbow, "quality");
    read(j, "left_wrist", c.left_wrist, "quality");
    read(j, "right_elbow", c.right_elbow, "quality");
    read(j, "right_wrist", c.right_wrist, "quality");
    validate(c);
    return c;
}

SessionConfig session_config_from_json(const json& j) {
    require_object(j, "session", {"mode", "target_fps", "compare", "nav", "viz"});
    SessionConfig c;
    if (auto it = j.find("mode"); it != j.end()) {
        const std::string m = it->is_string() ? it->get<std::string>() : "";
        if (m == "follow_along")
            c.mode = SessionMode::FollowAlong;
        else if (m == "navigation")
            c.mode = SessionMode::Navigation;
        else
            throw ValidationError("session: mode must be 'follow_along' or 'navigation'");
    }
    read(j, "target_fps", c.target_fps, "session");
    if (auto it = j.find("compare"); it != j.end()) c.compare = compare_config_from_json(*it);
    if (auto it = j.find("nav"); it != j.end()) c.nav = nav_config_from_json(*it);
    if (auto it = j.find("viz"); it != j.end()) {
        const json& v = *it;
        require_object(v, "viz",
                       {"trajectory", "footprints", "gaze", "indicators", "score", "trajectory_joint",
                        "trajectory_window", "footprint_interval", "footprint_fade", "gaze_length"});
        read(v, "trajectory", c.viz.trajectory, "viz");
        read(v, "footprints", c.viz.footprints, "viz");
        read(v, "gaze", c.viz.gaze, "viz");
        read(v, "indicators", c.viz.indicators, "viz");
        read(v, "score", c.viz.score, "viz");
        read(v, "trajectory_joint", c.viz.trajectory_joint, "viz");
        read(v, "trajectory_window", c.viz.trajectory_window, "viz");
        read(v, "footprint_interval", c.viz.footprint_interval, "viz");
        read(v, "footprint_fade", c.viz.footprint_fade, "viz");
        read(v, "gaze_length", c.viz.gaze_length, "viz");
    }
    validate(c);
    return c;
}

namespace {

void write_compare(JsonWriter& w, const CompareConfig& c) {
    w.begin_object().key("scored_joints").begin_array();
    for (auto j : c.scored_joints) w.value(name_of(j));
    w.end_array()
        .field("d_max", c.d_max)
        .field("limb_blue", c.limb_blue)
        .field("limb_yellow", c.limb_yellow)
        .field("smoothing_window", c.smoothing_window)
        .end_object();
}

void write_nav(JsonWriter& w, const NavConfig& c) {
    w.begin_object()
        .field("threshold", c.threshold)
        .field("step_seconds", c.step_seconds)
        .field("hold_frames", c.hold_frames)
        .field("use_smoothed", c.use_smoothed)
        .end_object();
}

}  // namespace

std::string compare_config_to_json(const CompareConfig& cfg) {
    JsonWriter w;
    write_compare(w, cfg);
    return w.take();
}

std::string nav_config_to_json(const NavConfig& cfg) {
    JsonWriter w;
    write_nav(w, cfg);
    return w.take();
}

std::string session_config_to_json(const SessionConfig& cfg) {
    JsonWriter w;
    w.begin_object().field("mode", name_of(cfg.mode)).field("target_fps", cfg.target_fps).key("compare");
    write_compare(w, cfg.compare);
    w.key("nav");
    write_nav(w, cfg.nav);
    const VizToggles& v = cfg.viz;
    w.key("viz")
        .begin_object()
        .field("trajectory", v.trajectory)
        .field("footprints", v.footprints)
        .field("gaze", v.gaze)
        .field("indicators", v.indicators)
        .field("score", v.score)
        .field("trajectory_joint", std::string_view(v.trajectory_joint))
        .field("trajectory_window", v.trajectory_window)
        .field("footprint_interval", v.footprint_interval)
        .field("footprint_fade", v.footprint_fade)
        .field("gaze_length", v.gaze_length)
        .end_object()
        .end_object();
    return w.take();
}

}  // namespace motionguide

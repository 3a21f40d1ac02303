#include "motionguide/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

void validate(const QualityConfig& cfg) {
    for (double v : {cfg.bone_length_tolerance, cfg.max_joint_speed, cfg.max_root_jump, cfg.ground_penetration,
                     cfg.limb_proximity_min})
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("quality thresholds must be positive");
}

std::string_view name_of(Glitch g) {
    switch (g) {
        case Glitch::BoneStretch: return "BoneStretch";
        case Glitch::VelocitySpike: return "VelocitySpike";
        case Glitch::RootTeleport: return "RootTeleport";
        case Glitch::GroundPenetration: return "GroundPenetration";
        case Glitch::LimbInterpenetration: return "LimbInterpenetration";
    }
    return "?";
}

std::size_t QualityReport::count(Glitch g) const {
    const auto it = std::find(kGlitches.begin(), kGlitches.end(), g);
    return per_category[static_cast<std::size_t>(it - kGlitches.begin())];
}

std::size_t QualityReport::clean_frames() const {
    return static_cast<std::size_t>(std::count(frame_flags.begin(), frame_flags.end(), std::uint8_t{0}));
}

namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squared_norm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + ab * t);
}

/// Jump detector for one trajectory. A sample is a spike when it is far from
/// both its predecessor and the last accepted sample (scaled by the gap).
class SpikeTracker {
public:
    explicit SpikeTracker(double max_step) : max_step_(max_step) {}

    bool push(std::size_t k, const Vec3& p) {
        bool spike = false;
        if (prev_) {
            const bool from_prev = distance(p, *prev_) > max_step_;
            const double gap = static_cast<double>(k - ref_index_);
            const bool from_ref = distance(p, ref_) > max_step_ * gap;
            spike = from_prev && from_ref;
        }
        prev_ = p;
        if (!spike) {
            ref_ = p;
            ref_index_ = k;
        }
        return spike;
    }

private:
    double max_step_;
    std::optional<Vec3> prev_;
    Vec3 ref_;
    std::size_t ref_index_ = 0;
};

}  // namespace

QualityReport check_clip(const MotionClip& clip, const QualityConfig& cfg) {
    validate(cfg);
    const Skeleton& skel = clip.skeleton();
    const std::size_t n = clip.frame_count();
    QualityReport report;
    report.frame_flags.assign(n, 0);

    std::vector<std::size_t> feet;
    for (const auto& name : cfg.foot_joints)
        if (auto i = skel.find(name)) feet.push_back(*i);
    if (feet.empty()) report.notes.push_back("ground check skipped: no foot joints found");

    const auto le = skel.find(cfg.left_elbow), lw = skel.find(cfg.left_wrist);
    const auto re = skel.find(cfg.right_elbow), rw = skel.find(cfg.right_wrist);
    const bool arms = le && lw && re && rw;
    if (!arms) report.notes.push_back("interpenetration check skipped: arm joints not found");

    const bool motion_checks = n >= 2;
    if (!motion_checks) report.notes.push_back("velocity and teleport checks skipped: clip has a single frame");

    SpikeTracker root_tracker(cfg.max_root_jump);
    std::vector<SpikeTracker> joint_trackers(skel.size(), SpikeTracker(cfg.max_joint_speed / clip.fps()));

    auto flag = [&](std::size_t k, Glitch g) { report.frame_flags[k] |= static_cast<std::uint8_t>(g); };

    for (std::size_t k = 0; k < n; ++k) {
        const WorldPose pose = forward_kinematics(skel, clip.frames()[k]);

        for (std::size_t j = 1; j < skel.size(); ++j) {
            const double rest = skel[j].offset.norm();
            const double len = distance(pose[j].position, pose[*skel[j].parent].position);
            if (std::abs(len - rest) > cfg.bone_length_tolerance * rest) flag(k, Glitch::BoneStretch);
        }

        if (motion_checks) {
            if (root_tracker.push(k, pose[0].position)) flag(k, Glitch::RootTeleport);
            for (std::size_t j = 1; j < skel.size(); ++j)
                if (joint_trackers[j].push(k, pose[j].position - pose[0].position)) flag(k, Glitch::VelocitySpike);
        }

        for (std::size_t f : feet)
            if (pose[f].position.y < -cfg.ground_penetration) flag(k, Glitch::GroundPenetration);

        if (arms) {
            const double left_to_right =
                point_segment_distance(pose[*lw].position, pose[*re].position, pose[*rw].position);
            const double right_to_left =
                point_segment_distance(pose[*rw].position, pose[*le].position, pose[*lw].position);
            if (std::min(left_to_right, right_to_left) < cfg.limb_proximity_min)
                flag(k, Glitch::LimbInterpenetration);
        }
    }

    for (std::size_t c = 0; c < kGlitches.size(); ++c)
        for (std::size_t k = 0; k < n; ++k)
            if (report.has(k, kGlitches[c])) ++report.per_category[c];
    report.clean_fraction = static_cast<double>(report.clean_frames()) / static_cast<double>(n);
    return report;
}

std::string to_json(const QualityReport& report) {
    JsonWriter w;
    w.begin_object()
        .field("frames", report.frame_flags.size())
        .field("clean_frames", report.clean_frames())
        .field("clean_fraction", report.clean_fraction)
        .key("counts")
        .begin_object();
    for (std::size_t c = 0; c < kGlitches.size(); ++c) w.field(name_of(kGlitches[c]), report.per_category[c]);
    w.end_object().key("flagged").begin_array();
    for (std::size_t k = 0; k < report.frame_flags.size(); ++k) {
        if (!report.frame_flags[k]) continue;
        w.begin_object().field("frame", k).key("flags").begin_array();
        for (Glitch g : kGlitches)
            if (report.has(k, g)) w.value(name_of(g));
        w.end_array().end_object();
    }
    w.end_array().key("notes").begin_array();
    for (const auto& note : report.notes) w.value(std::string_view(note));
    w.end_array().end_object();
    return w.take();
}

std::string summarize(const QualityReport& report) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "frames: %zu\n", report.frame_flags.size());
    out += line;
    std::snprintf(line, sizeof line, "clean_frames: %zu\n", report.clean_frames());
    out += line;
    out += "clean_fraction: " + format_fixed(report.clean_fraction, 3) + "\n";
    out += "category              frames\n";
    for (std::size_t c = 0; c < kGlitches.size(); ++c) {
        std::snprintf(line, sizeof line, "%-21s %zu\n", std::string(name_of(kGlitches[c])).c_str(),
                      report.per_category[c]);
        out += line;
    }
    for (const auto& note : report.notes) out += "note: " + note + "\n";
    out += "json: " + to_json(report) + "\n";
    return out;
}

}  // namespace motionguide

#include "motionguide/session.hpp"

#include <algorithm>
#include <cmath>

#include "motionguide/config.hpp"
#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

std::string_view name_of(SessionMode mode) {
    return mode == SessionMode::FollowAlong ? "follow_along" : "navigation";
}

void validate(const SessionConfig& cfg) {
    validate(cfg.compare);
    validate(cfg.nav);
    if (!(cfg.target_fps > 0.0) || !std::isfinite(cfg.target_fps))
        throw ValidationError("target_fps must be positive");
    const VizToggles& v = cfg.viz;
    if (!canonical_joint(v.trajectory_joint))
        throw ValidationError("trajectory_joint '" + v.trajectory_joint + "' is not a canonical joint");
    if (!(v.trajectory_window >= 0.0)) throw ValidationError("trajectory_window must be non-negative");
    if (!(v.footprint_interval > 0.0) || !(v.footprint_fade > 0.0))
        throw ValidationError("footprint interval and fade must be positive");
    if (!(v.gaze_length > 0.0)) throw ValidationError("gaze_length must be positive");
}

SessionSummary summarize_frames(const std::vector<FeedbackFrame>& frames, SessionMode mode,
                                std::size_t instructor_frames) {
    SessionSummary s;
    s.ticks = frames.size();
    if (frames.empty()) return s;
    double sum = 0.0;
    s.min_score = s.max_score = frames.front().score.total;
    for (const auto& f : frames) {
        sum += f.score.total;
        s.min_score = std::min(s.min_score, f.score.total);
        s.max_score = std::max(s.max_score, f.score.total);
    }
    s.mean_score = sum / static_cast<double>(frames.size());
    if (mode == SessionMode::FollowAlong) {
        if (frames.size() >= instructor_frames) {
            s.completed = true;
            s.completion_tick = frames[instructor_frames - 1].tick;
        }
    } else {
        for (const auto& f : frames)
            for (const auto& e : f.events)
                if (e.kind == NavEventKind::Completed && !s.completed) {
                    s.completed = true;
                    s.completion_tick = e.at_tick;
                }
    }
    return s;
}

namespace {

InstructorTrack build_track(const MotionClip& instructor, const JointMapTable& map) {
    try {
        return {normalize_clip(instructor, map), instructor.fps()};
    } catch (const Error& e) {
        throw SessionError(std::string("instructor clip: ") + e.what());
    }
}

}  // namespace

SessionEngine::SessionEngine(const MotionClip& instructor, JointMapTable user_map, SessionConfig cfg,
                             JointMapTable instructor_map)
    : cfg_(std::move(cfg)),
      instructor_(),
      instructor_map_(std::move(instructor_map)),
      user_pipeline_(std::move(user_map)),
      history_(1) {
    validate(cfg_);
    instructor_ = resample(instructor, cfg_.target_fps);
    track_ = build_track(instructor_, instructor_map_);
    history_ = ScoreHistory(cfg_.compare.smoothing_window);
    checkpoints_ = build_checkpoints(clip_duration(instructor_), cfg_.nav.step_seconds);
    nav_ = initial_state(checkpoints_);
}

bool SessionEngine::exhausted() const {
    return cfg_.mode == SessionMode::FollowAlong && tick_ >= instructor_.frame_count();
}

std::string SessionEngine::source_joint(std::string_view canonical) const {
    if (auto src = instructor_map_.source_for(canonical)) return *src;
    throw VizError("instructor map has no source for '" + std::string(canonical) + "'");
}

std::vector<ScenePrimitive> SessionEngine::scene_at(double instructor_t, double t) const {
    std::vector<ScenePrimitive> scene;
    const VizToggles& v = cfg_.viz;
    if (v.trajectory)
        scene.push_back(to_primitive(
            trajectory(instructor_, source_joint(v.trajectory_joint), instructor_t, v.trajectory_window), t));
    if (v.footprints) {
        FootprintOptions opt{v.footprint_interval, v.footprint_fade, source_joint("left_foot"),
                             source_joint("right_foot")};
        for (const auto& m : footprints(instructor_, instructor_t, opt)) scene.push_back(to_primitive(m, t));
    }
    if (v.gaze) {
        const WorldPose pose = forward_kinematics(instructor_.skeleton(), sample_clip(instructor_, instructor_t));
        scene.push_back(to_primitive(head_gaze(pose, v.gaze_length, source_joint("head")), t));
    }
    return scene;
}

FeedbackFrame SessionEngine::push(const WorldPose& user_pose) {
    if (exhausted())
        throw SessionError("tick " + std::to_string(tick_) + ": instructor clip has ended");
    FeedbackFrame f;
    f.tick = tick_;
    f.t = static_cast<double>(tick_) / cfg_.target_fps;
    try {
        const NormalizedPose user = user_pipeline_.push(user_pose);
        if (cfg_.mode == SessionMode::FollowAlong) {
            f.instructor_t = f.t;
            const NormalizedPose& ref = track_.poses[tick_];
            f.score = pose_score(user, ref, cfg_.compare);
            f.smoothed = history_.push(f.score.total);
            if (cfg_.viz.indicators) {
                LimbColors colors{};
                for (std::size_t i = 0; i < kLimbs.size(); ++i)
                    colors[i] = limb_indicator(user, ref, kLimbs[i], cfg_.compare);
                f.indicators = colors;
            }
        } else {
            f.instructor_t = nav_.playhead_seconds;
            const NormalizedPose& ref = track_.at(nav_.playhead_seconds);
            if (nav_.completed) {
                f.score = pose_score(user, ref, cfg_.compare);
                f.smoothed = history_.push(f.score.total);
            } else {
                auto step = nav_step(nav_, user, track_, checkpoints_, cfg_.nav, cfg_.compare, history_, tick_);
                f.score = step.score;
                f.smoothed = step.smoothed;
                nav_ = step.result.state;
                f.events = std::move(step.result.events);
            }
            if (cfg_.viz.indicators) {
                LimbColors colors{};
                for (std::size_t i = 0; i < kLimbs.size(); ++i)
                    colors[i] = limb_indicator(user, ref, kLimbs[i], cfg_.compare);
                f.indicators = colors;
            }
            f.nav = nav_;
        }
        f.scene = scene_at(f.instructor_t, f.t);
    } catch (const Error& e) {
        throw SessionError("tick " + std::to_string(tick_) + ": " + e.what());
    }
    ++tick_;
    return f;
}

SessionSummary SessionEngine::summary(const std::vector<FeedbackFrame>& frames) const {
    return summarize_frames(frames, cfg_.mode, instructor_.frame_count());
}

SessionLog run_session(const MotionClip& instructor, const MotionClip& user, const JointMapTable& user_map,
                       const SessionConfig& cfg, const JointMapTable& instructor_map) {
    SessionEngine engine(instructor, user_map, cfg, instructor_map);
    const MotionClip u = resample(user, cfg.target_fps);
    SessionLog log;
    log.config = cfg;
    std::size_t n = u.frame_count();
    if (cfg.mode == SessionMode::FollowAlong) n = std::min(n, engine.instructor_frames());
    log.frames.reserve(n);
    for (std::size_t k = 0; k < n; ++k) log.frames.push_back(engine.push(forward_kinematics(u.skeleton(), u.frames()[k])));
    log.summary = engine.summary(log.frames);
    return log;
}

namespace {

void write_nav(JsonWriter& w, const NavState& s) {
    w.begin_object()
        .field("checkpoint", s.checkpoint_index)
        .field("playhead", s.playhead_seconds)
        .field("hits", s.consecutive_hits)
        .field("completed", s.completed)
        .end_object();
}

void write_frame(JsonWriter& w, const FeedbackFrame& f) {
    w.begin_object()
        .field("tick", f.tick)
        .field("t", f.t)
        .field("instructor_t", f.instructor_t)
        .field("total", f.score.total)
        .field("display_total", f.score.display_total)
        .key("per_joint")
        .begin_object();
    for (const auto& [joint, pts] : f.score.per_joint) w.field(name_of(joint), pts);
    w.end_object().field("smoothed", f.smoothed);
    w.key("indicators");
    if (f.indicators) {
        w.begin_object();
        for (std::size_t i = 0; i < kLimbs.size(); ++i) w.field(name_of(kLimbs[i]), name_of((*f.indicators)[i]));
        w.end_object();
    } else {
        w.null();
    }
    w.key("nav");
    if (f.nav)
        write_nav(w, *f.nav);
    else
        w.null();
    w.key("events").begin_array();
    for (const auto& e : f.events)
        w.begin_object()
            .field("kind", name_of(e.kind))
            .field("tick", e.at_tick)
            .field("from", e.from_checkpoint)
            .field("to", e.to_checkpoint)
            .end_object();
    w.end_array();
    if (!f.scene.empty()) {
        w.key("scene");
        write_scene(w, f.scene);
    }
    w.end_object();
}

}  // namespace

std::string feedback_to_json(const FeedbackFrame& frame) {
    JsonWriter w;
    write_frame(w, frame);
    return w.take();
}

std::string summary_to_json(const SessionLog& log) {
    const SessionSummary& s = log.summary;
    JsonWriter w;
    w.begin_object().key("summary").begin_object();
    w.field("ticks", s.ticks)
        .field("mean", s.mean_score)
        .field("min", s.min_score)
        .field("max", s.max_score)
        .field("completed", s.completed)
        .key("completion_tick");
    if (s.completion_tick)
        w.value(*s.completion_tick);
    else
        w.null();
    w.end_object().key("config").raw(session_config_to_json(log.config)).end_object();
    return w.take();
}

std::string write_log(const SessionLog& log, LogFormat format) {
    std::string out;
    if (format == LogFormat::Jsonl) {
        for (const auto& f : log.frames) out += feedback_to_json(f) + "\n";
        out += summary_to_json(log) + "\n";
        return out;
    }
    out += std::string(kCsvHeader) + "\n";
    for (const auto& f : log.frames) {
        out += std::to_string(f.tick) + "," + format_fixed(f.t) + "," + format_fixed(f.score.total);
        for (std::size_t i = 0; i < kLimbs.size(); ++i) {
            out += ",";
            if (f.indicators) out += name_of((*f.indicators)[i]);
        }
        out += ",";
        if (f.nav) out += std::to_string(f.nav->checkpoint_index);
        out += "\n";
    }
    return out;
}

}  // namespace motionguide

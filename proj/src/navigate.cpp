#include "motionguide/navigate.hpp"

#include <cmath>

#include "motionguide/error.hpp"

namespace motionguide {

void validate(const NavConfig& cfg) {
    if (!(cfg.threshold >= 0.0 && cfg.threshold <= 100.0))
        throw ValidationError("navigation threshold must be within [0, 100]");
    if (!(cfg.step_seconds > 0.0) || !std::isfinite(cfg.step_seconds))
        throw ValidationError("step_seconds must be positive");
    if (cfg.hold_frames < 1) throw ValidationError("hold_frames must be >= 1");
}

std::string_view name_of(NavEventKind kind) {
    return kind == NavEventKind::Advanced ? "Advanced" : "Completed";
}

std::vector<double> build_checkpoints(double duration, double step_seconds) {
    if (!(step_seconds > 0.0)) throw DomainError("step_seconds must be positive");
    if (!(duration >= 0.0)) throw DomainError("duration must be non-negative");
    std::vector<double> times;
    const double eps = 1e-9 * std::max(1.0, duration);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * step_seconds;
        if (t >= duration - eps) break;
        times.push_back(t);
    }
    times.push_back(duration);
    return times;
}

std::vector<double> build_checkpoints(const MotionClip& clip, const NavConfig& cfg) {
    validate(cfg);
    return build_checkpoints(clip_duration(clip), cfg.step_seconds);
}

NavState initial_state(const std::vector<double>& checkpoints) {
    NavState s;
    s.playhead_seconds = checkpoints.empty() ? 0.0 : checkpoints.front();
    s.completed = checkpoints.size() <= 1;
    return s;
}

NavStepResult nav_step(const NavState& state, double score, std::size_t tick,
                       const std::vector<double>& checkpoints, const NavConfig& cfg) {
    NavStepResult r{state, {}};
    if (state.completed) return r;
    if (state.checkpoint_index + 1 >= checkpoints.size())
        throw DomainError("navigation state is past the last checkpoint");

    NavState& s = r.state;
    s.consecutive_hits = score >= cfg.threshold ? s.consecutive_hits + 1 : 0;
    if (s.consecutive_hits < cfg.hold_frames) return r;

    const std::size_t from = s.checkpoint_index;
    s.checkpoint_index = from + 1;
    s.playhead_seconds = checkpoints[s.checkpoint_index];
    s.consecutive_hits = 0;
    r.events.push_back({NavEventKind::Advanced, tick, from, from + 1});
    if (s.checkpoint_index + 1 == checkpoints.size()) {
        s.completed = true;
        r.events.push_back({NavEventKind::Completed, tick, from, from + 1});
    }
    return r;
}

const NormalizedPose& InstructorTrack::at(double seconds) const {
    if (poses.empty()) throw DomainError("instructor track is empty");
    const double u = std::round(seconds * fps);
    const auto i = static_cast<std::size_t>(std::max(0.0, u));
    return poses[std::min(i, poses.size() - 1)];
}

ScoredNavStep nav_step(const NavState& state, const NormalizedPose& user_pose, const InstructorTrack& instructor,
                       const std::vector<double>& checkpoints, const NavConfig& cfg, const CompareConfig& compare,
                       ScoreHistory& history, std::size_t tick) {
    ScoredNavStep out;
    out.score = pose_score(user_pose, instructor.at(state.playhead_seconds), compare);
    out.smoothed = history.push(out.score.total);
    out.result = nav_step(state, cfg.use_smoothed ? out.smoothed : out.score.total, tick, checkpoints, cfg);
    if (out.result.advanced()) history.clear();
    return out;
}

NavigationRun run_navigation(const InstructorTrack& instructor, const std::vector<NormalizedPose>& user,
                             const NavConfig& cfg, const CompareConfig& compare) {
    validate(cfg);
    validate(compare);
    const double duration = static_cast<double>(instructor.poses.size() - 1) / instructor.fps;
    const auto checkpoints = build_checkpoints(duration, cfg.step_seconds);
    NavigationRun run;
    run.final_state = initial_state(checkpoints);
    ScoreHistory history(compare.smoothing_window);
    for (std::size_t tick = 0; tick < user.size(); ++tick) {
        if (!run.final_state.completed) {
            auto step = nav_step(run.final_state, user[tick], instructor, checkpoints, cfg, compare, history, tick);
            run.final_state = step.result.state;
            run.events.insert(run.events.end(), step.result.events.begin(), step.result.events.end());
        }
        run.playheads.push_back(run.final_state.playhead_seconds);
    }
    return run;
}

NavigationRun run_navigation(const MotionClip& instructor, const MotionClip& user, const NavConfig& cfg,
                             const CompareConfig& compare, const JointMapTable& user_map,
                             const JointMapTable& instructor_map) {
    const MotionClip user_resampled = resample(user, instructor.fps());
    InstructorTrack track{normalize_clip(instructor, instructor_map), instructor.fps()};
    return run_navigation(track, normalize_clip(user_resampled, user_map), cfg, compare);
}

}  // namespace motionguide

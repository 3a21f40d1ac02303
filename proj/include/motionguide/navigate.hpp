#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "motionguide/compare.hpp"
#include "motionguide/normalize.hpp"

namespace motionguide {

struct NavConfig {
    /// Score (0-100) the user must reach to release the current checkpoint.
    double threshold = 70.0;
    double step_seconds = 2.0;
    /// Consecutive qualifying ticks required before advancing.
    int hold_frames = 5;
    bool use_smoothed = true;

    static NavConfig high_accuracy() { NavConfig c; c.threshold = 85.0; return c; }
    static NavConfig fine() { NavConfig c; c.step_seconds = 0.5; return c; }
    static NavConfig coarse() { NavConfig c; c.step_seconds = 2.0; return c; }
};

/// Throws ValidationError unless threshold in [0, 100], step > 0, hold >= 1.
void validate(const NavConfig& cfg);

struct NavState {
    std::size_t checkpoint_index = 0;
    double playhead_seconds = 0.0;
    int consecutive_hits = 0;
    bool completed = false;

    bool operator==(const NavState&) const = default;
};

enum class NavEventKind { Advanced, Completed };
std::string_view name_of(NavEventKind kind);

struct NavEvent {
    NavEventKind kind = NavEventKind::Advanced;
    std::size_t at_tick = 0;
    std::size_t from_checkpoint = 0;
    std::size_t to_checkpoint = 0;

    bool operator==(const NavEvent&) const = default;
};

/// {0, step, 2 step, ...} strictly below the duration, then the duration itself.
std::vector<double> build_checkpoints(double duration, double step_seconds);
std::vector<double> build_checkpoints(const MotionClip& clip, const NavConfig& cfg);

/// State at checkpoint 0; already completed when there is only one checkpoint.
NavState initial_state(const std::vector<double>& checkpoints);

struct NavStepResult {
    NavState state;
    /// Advanced on every move; the move onto the last checkpoint also emits Completed.
    std::vector<NavEvent> events;
    bool advanced() const { return !events.empty(); }
};

/// Debounced threshold test on an already computed score. A completed state
/// is returned unchanged.
NavStepResult nav_step(const NavState& state, double score, std::size_t tick,
                       const std::vector<double>& checkpoints, const NavConfig& cfg);

/// Instructor poses on a uniform time grid; checkpoint poses are freeze-frames.
struct InstructorTrack {
    std::vector<NormalizedPose> poses;
    double fps = 30.0;

    const NormalizedPose& at(double seconds) const;
};

struct ScoredNavStep {
    NavStepResult result;
    ScoreReport score;
    double smoothed = 0.0;
};

/// Scores the user against the current checkpoint's freeze-frame, smooths the
/// total through `history` (cleared after an advance) and applies `nav_step`.
ScoredNavStep nav_step(const NavState& state, const NormalizedPose& user_pose, const InstructorTrack& instructor,
                       const std::vector<double>& checkpoints, const NavConfig& cfg, const CompareConfig& compare,
                       ScoreHistory& history, std::size_t tick);

struct NavigationRun {
    NavState final_state;
    std::vector<NavEvent> events;
    std::vector<double> playheads;  ///< one per tick
};

/// Folds `nav_step` over the user poses in order.
NavigationRun run_navigation(const InstructorTrack& instructor, const std::vector<NormalizedPose>& user,
                             const NavConfig& cfg, const CompareConfig& compare);

/// Clip-level entry: resamples the user clip to the instructor's rate,
/// retargets both through their maps and normalizes them before folding.
NavigationRun run_navigation(const MotionClip& instructor, const MotionClip& user, const NavConfig& cfg,
                             const CompareConfig& compare, const JointMapTable& user_map,
                             const JointMapTable& instructor_map);

}  // namespace motionguide

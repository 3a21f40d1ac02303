#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionguide/compare.hpp"
#include "motionguide/joint_map.hpp"
#include "motionguide/navigate.hpp"
#include "motionguide/viz.hpp"

namespace motionguide {

enum class SessionMode { FollowAlong, Navigation };
std::string_view name_of(SessionMode mode);

/// Which feedback features a session produces. Scene geometry is generated
/// from the instructor clip at the instructor's current time.
struct VizToggles {
    bool trajectory = false;
    bool footprints = false;
    bool gaze = false;
    bool indicators = true;
    bool score = true;
    std::string trajectory_joint = "right_wrist";
    double trajectory_window = 1.5;
    double footprint_interval = 2.0;
    double footprint_fade = 4.0;
    double gaze_length = 2.0;
};

struct SessionConfig {
    SessionMode mode = SessionMode::FollowAlong;
    CompareConfig compare;
    NavConfig nav;
    VizToggles viz;
    double target_fps = 30.0;
};

/// Throws ValidationError when a sub-config is invalid.
void validate(const SessionConfig& cfg);

using LimbColors = std::array<IndicatorColor, kLimbs.size()>;

struct FeedbackFrame {
    std::size_t tick = 0;
    double t = 0.0;              ///< tick / target_fps
    double instructor_t = 0.0;   ///< instructor time compared against
    ScoreReport score;
    double smoothed = 0.0;
    std::optional<LimbColors> indicators;
    std::optional<NavState> nav;
    std::vector<NavEvent> events;
    std::vector<ScenePrimitive> scene;
};

struct SessionSummary {
    std::size_t ticks = 0;
    double mean_score = 0.0;
    double min_score = 0.0;
    double max_score = 0.0;
    bool completed = false;
    std::optional<std::size_t> completion_tick;

    bool operator==(const SessionSummary&) const = default;
};

struct SessionLog {
    SessionConfig config;
    std::vector<FeedbackFrame> frames;
    SessionSummary summary;
};

/// Recomputes the summary from frames. FollowAlong completes when the user
/// reached the instructor's last frame; Navigation on the Completed event.
SessionSummary summarize_frames(const std::vector<FeedbackFrame>& frames, SessionMode mode,
                                std::size_t instructor_frames);

/// One session as a sequential fold over user poses. The offline simulator
/// and the live server both drive this, one pose per tick.
class SessionEngine {
public:
    /// Resamples the instructor to the target rate and prepares its
    /// normalized track. Throws SessionError when it cannot be normalized.
    SessionEngine(const MotionClip& instructor, JointMapTable user_map, SessionConfig cfg,
                  JointMapTable instructor_map = identity_canonical_map());

    /// Scores the next user pose. Throws SessionError with the tick on
    /// retarget, normalize or comparison failure, or when FollowAlong ran
    /// past the instructor's last frame.
    FeedbackFrame push(const WorldPose& user_pose);

    /// FollowAlong only: the instructor clip has been fully played.
    bool exhausted() const;
    std::size_t ticks() const noexcept { return tick_; }
    std::size_t instructor_frames() const noexcept { return instructor_.frame_count(); }
    const SessionConfig& config() const noexcept { return cfg_; }
    const MotionClip& instructor() const noexcept { return instructor_; }

    /// Summary over the frames it is given (normally all frames produced).
    SessionSummary summary(const std::vector<FeedbackFrame>& frames) const;

private:
    std::vector<ScenePrimitive> scene_at(double instructor_t, double t) const;
    std::string source_joint(std::string_view canonical) const;

    SessionConfig cfg_;
    MotionClip instructor_;
    JointMapTable instructor_map_;
    InstructorTrack track_;
    PosePipeline user_pipeline_;
    ScoreHistory history_;
    std::vector<double> checkpoints_;
    NavState nav_;
    std::size_t tick_ = 0;
};

/// Offline replay: resamples both clips to `cfg.target_fps`, then feeds user
/// frames in order. FollowAlong stops at the shorter clip; Navigation runs
/// through every user frame.
SessionLog run_session(const MotionClip& instructor, const MotionClip& user, const JointMapTable& user_map,
                       const SessionConfig& cfg, const JointMapTable& instructor_map = identity_canonical_map());

enum class LogFormat { Jsonl, Csv };

/// Byte-stable encodings: JSONL is one frame per line plus a trailing
/// summary line carrying the config echo; CSV is one row per tick.
std::string write_log(const SessionLog& log, LogFormat format);
std::string feedback_to_json(const FeedbackFrame& frame);
std::string summary_to_json(const SessionLog& log);

inline constexpr std::string_view kCsvHeader = "tick,t,total,left_arm,right_arm,left_leg,right_leg,checkpoint";

}  // namespace motionguide

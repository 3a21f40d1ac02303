#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "motionguide/skeleton.hpp"

namespace motionguide {

struct StreamJoint {
    std::string name;
    Vec3 position;   ///< world, meters, Y up / Z forward
    Quat rotation;   ///< world
    double confidence = 1.0;
};

/// One captured sample: `{"t": s, "joints": [{"name", "pos", "rot", "conf"}]}`.
struct StreamFrameRecord {
    double t = 0.0;
    std::vector<StreamJoint> joints;
};

/// Validates and converts a parsed JSON object (extra keys such as "type" are
/// ignored). `line` is used for error messages.
StreamFrameRecord stream_record_from_json(const nlohmann::json& obj, std::size_t line);
StreamFrameRecord parse_stream_record(std::string_view text, std::size_t line);
std::string to_json_line(const StreamFrameRecord& record);

/// Turns world-space records into local PoseFrames for one skeleton. The first
/// record calibrates the rest offsets; joints missing from a record keep their
/// previous local value. Shared by the offline parser and the live server so
/// both see identical frames.
class StreamDecoder {
public:
    explicit StreamDecoder(Skeleton skeleton);

    /// Throws ParseError (with `line`) on unknown joints or non-increasing time.
    PoseFrame push(const StreamFrameRecord& record, std::size_t line = 0);

    /// Template skeleton before the first record, calibrated after it.
    const Skeleton& skeleton() const noexcept { return skeleton_; }
    std::size_t records() const noexcept { return count_; }

private:
    Skeleton skeleton_;
    std::vector<Quat> local_rot_;
    std::vector<Vec3> local_off_;
    Vec3 root_;
    std::optional<double> last_t_;
    std::size_t count_ = 0;
};

/// Parses JSON lines and resamples onto a uniform grid at `target_fps`
/// starting at the first timestamp: floor(duration * fps) + 1 frames. Records
/// within 0.1% of a frame period of a grid time are used as-is.
MotionClip parse_joint_stream(std::string_view lines, const Skeleton& skeleton, double target_fps = 30.0);

/// One record per frame at t = k / fps with every joint's FK world pose.
std::string write_joint_stream(const MotionClip& clip);

}  // namespace motionguide

#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionguide/joint_stream.hpp"
#include "motionguide/session.hpp"

namespace motionguide {

inline constexpr int kProtocolVersion = 1;

enum class WireErrorCode { UnknownClip, BadMessage, Version, Protocol, Busy, Ended, Processing };
std::string_view name_of(WireErrorCode code);

/// Instructor clips addressable by id (file stem). Read-only once loaded.
class ClipRegistry {
public:
    struct Entry {
        MotionClip clip;
        /// From `<stem>.map.json` when present, else the identity map.
        JointMapTable map;
    };

    /// Loads every `*.bvh` in `dir`. Throws Error naming the offending file.
    static ClipRegistry load(const std::filesystem::path& dir);

    void add(std::string id, MotionClip clip, JointMapTable map = identity_canonical_map());
    const Entry* find(std::string_view id) const;
    std::vector<std::string> ids() const;

private:
    std::map<std::string, Entry, std::less<>> entries_;
};

/// Shared, read-only server state plus the session counters.
struct ServerContext {
    const ClipRegistry* registry = nullptr;
    /// Logs go to `<log_dir>/<session_id>.jsonl`; none are written when empty.
    std::optional<std::filesystem::path> log_dir;
    std::size_t max_sessions = 64;

    std::atomic<std::size_t> next_session{1};
    std::atomic<std::size_t> active_sessions{0};
};

/// One client's protocol state machine, independent of the transport.
/// Every line gets exactly one reply line until `closed()`; Bye closes
/// without a reply.
class Connection {
public:
    explicit Connection(ServerContext& ctx);
    ~Connection();
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;

    /// Handles one line (without its terminator). Returns the reply, or
    /// nothing when the line was a Bye.
    std::optional<std::string> handle(std::string_view line);

    /// Finalizes the session (writes its log) if one is open. Idempotent;
    /// called on Bye, on fatal errors and on disconnect.
    void finish();

    bool closed() const noexcept { return closed_; }
    const std::string& session_id() const noexcept { return session_id_; }
    /// Frames produced so far (the log's frames).
    const std::vector<FeedbackFrame>& frames() const noexcept { return frames_; }

private:
    std::string error(WireErrorCode code, const std::string& detail, bool close);
    std::string on_hello(const nlohmann::json& msg);
    std::string on_frame(const nlohmann::json& msg);

    ServerContext& ctx_;
    std::unique_ptr<SessionEngine> engine_;
    std::unique_ptr<StreamDecoder> decoder_;
    std::vector<FeedbackFrame> frames_;
    std::string session_id_;
    std::size_t lines_ = 0;
    bool counted_ = false;
    bool closed_ = false;
    bool finished_ = false;
};

/// Client-side helpers producing wire lines (no trailing newline).
std::string hello_message(std::string_view clip_id, const SessionConfig& cfg,
                          const std::optional<JointMapTable>& user_map = std::nullopt);
std::string frame_message(const StreamFrameRecord& record);
std::string bye_message();

/// Resolves the user skeleton for a map: a built-in skeleton id, or the
/// skeleton of a registry clip with that id.
std::optional<Skeleton> resolve_source_skeleton(const JointMapTable& map, const ClipRegistry& registry);

}  // namespace motionguide

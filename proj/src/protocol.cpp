#include "motionguide/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "motionguide/builtin.hpp"
#include "motionguide/bvh.hpp"
#include "motionguide/config.hpp"
#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view name_of(WireErrorCode code) {
    switch (code) {
        case WireErrorCode::UnknownClip: return "UnknownClip";
        case WireErrorCode::BadMessage: return "BadMessage";
        case WireErrorCode::Version: return "Version";
        case WireErrorCode::Protocol: return "Protocol";
        case WireErrorCode::Busy: return "Busy";
        case WireErrorCode::Ended: return "Ended";
        case WireErrorCode::Processing: return "Processing";
    }
    return "?";
}

ClipRegistry ClipRegistry::load(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw Error(dir.string() + ": registry is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".bvh") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    ClipRegistry reg;
    for (const auto& path : files) {
        MotionClip clip = load_bvh_file(path.string());
        JointMapTable map = identity_canonical_map();
        auto map_path = path;
        map_path.replace_extension(".map.json");
        if (std::filesystem::exists(map_path)) {
            try {
                map = load_joint_map(read_file(map_path));
            } catch (const Error& e) {
                throw Error(map_path.string() + ": " + e.what());
            }
        }
        reg.add(path.stem().string(), std::move(clip), std::move(map));
    }
    return reg;
}

void ClipRegistry::add(std::string id, MotionClip clip, JointMapTable map) {
    entries_.insert_or_assign(std::move(id), Entry{std::move(clip), std::move(map)});
}

const ClipRegistry::Entry* ClipRegistry::find(std::string_view id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> ClipRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, e] : entries_) out.push_back(id);
    return out;
}

std::optional<Skeleton> resolve_source_skeleton(const JointMapTable& map, const ClipRegistry& registry) {
    if (auto s = builtin_skeleton(map.source_skeleton_id)) return s;
    if (const auto* e = registry.find(map.source_skeleton_id)) return e->clip.skeleton();
    return std::nullopt;
}

Connection::Connection(ServerContext& ctx) : ctx_(ctx) {}

Connection::~Connection() { finish(); }

std::string Connection::error(WireErrorCode code, const std::string& detail, bool close) {
    if (close) {
        closed_ = true;
        finish();
    }
    JsonWriter w;
    w.begin_object()
        .field("type", "error")
        .field("code", name_of(code))
        .field("detail", std::string_view(detail))
        .end_object();
    return w.take();
}

std::optional<std::string> Connection::handle(std::string_view line) {
    if (closed_) return error(WireErrorCode::Protocol, "connection is closed", true);
    ++lines_;
    if (line.size() > kMaxLineBytes) return error(WireErrorCode::BadMessage, "line too long", true);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error&) {
        return error(WireErrorCode::BadMessage, "line " + std::to_string(lines_) + ": malformed JSON", true);
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
        return error(WireErrorCode::BadMessage, "message needs a string \"type\"", true);
    const std::string type = msg["type"].get<std::string>();

    if (type == "hello") {
        if (engine_) return error(WireErrorCode::Protocol, "session already started", true);
        return on_hello(msg);
    }
    if (type == "frame") {
        if (!engine_) return error(WireErrorCode::Protocol, "frame before ready", true);
        return on_frame(msg);
    }
    if (type == "bye") {
        closed_ = true;
        finish();
        return std::nullopt;
    }
    return error(WireErrorCode::BadMessage, "unknown message type '" + type + "'", true);
}

std::string Connection::on_hello(const json& msg) {
    if (!msg.contains("protocol_version") || !msg["protocol_version"].is_number_integer())
        return error(WireErrorCode::BadMessage, "hello needs an integer protocol_version", true);
    const auto version = msg["protocol_version"].get<long long>();
    if (version != kProtocolVersion)
        return error(WireErrorCode::Version,
                     "unsupported protocol_version " + std::to_string(version) + ", expected 1", true);
    if (!msg.contains("instructor_clip_id") || !msg["instructor_clip_id"].is_string())
        return error(WireErrorCode::BadMessage, "hello needs a string instructor_clip_id", true);
    const std::string clip_id = msg["instructor_clip_id"].get<std::string>();
    const ClipRegistry::Entry* entry = ctx_.registry ? ctx_.registry->find(clip_id) : nullptr;
    if (!entry) return error(WireErrorCode::UnknownClip, "no clip with id '" + clip_id + "'", true);

    SessionConfig cfg;
    JointMapTable user_map = identity_canonical_map();
    try {
        if (msg.contains("config")) cfg = session_config_from_json(msg["config"]);
        if (msg.contains("map")) {
            const json& m = msg["map"];
            if (m.is_string()) {
                const std::string name = m.get<std::string>();
                if (name == "kinect32")
                    user_map = default_kinect_map();
                else if (name == "canonical20")
                    user_map = identity_canonical_map();
                else
                    throw ValidationError("unknown built-in map '" + name + "'");
            } else {
                user_map = load_joint_map(m.dump());
            }
        }
    } catch (const Error& e) {
        return error(WireErrorCode::BadMessage, e.what(), true);
    }
    auto skeleton = resolve_source_skeleton(user_map, *ctx_.registry);
    if (!skeleton)
        return error(WireErrorCode::BadMessage,
                     "unknown source skeleton '" + user_map.source_skeleton_id + "'", true);

    const std::size_t active = ++ctx_.active_sessions;
    counted_ = true;
    if (active > ctx_.max_sessions) return error(WireErrorCode::Busy, "server is at max_sessions", true);

    try {
        engine_ = std::make_unique<SessionEngine>(entry->clip, user_map, cfg, entry->map);
    } catch (const Error& e) {
        return error(WireErrorCode::Processing, e.what(), true);
    }
    decoder_ = std::make_unique<StreamDecoder>(*skeleton);
    char id[32];
    std::snprintf(id, sizeof id, "session-%06zu", ctx_.next_session.fetch_add(1));
    session_id_ = id;

    JsonWriter w;
    w.begin_object().field("type", "ready").field("session_id", std::string_view(session_id_)).end_object();
    return w.take();
}

std::string Connection::on_frame(const json& msg) {
    if (engine_->exhausted()) return error(WireErrorCode::Ended, "instructor clip has ended", false);
    StreamFrameRecord rec;
    PoseFrame frame;
    try {
        rec = stream_record_from_json(msg, lines_);
        frame = decoder_->push(rec, lines_);
    } catch (const Error& e) {
        return error(WireErrorCode::BadMessage, e.what(), true);
    }
    try {
        frames_.push_back(engine_->push(forward_kinematics(decoder_->skeleton(), frame)));
    } catch (const Error& e) {
        return error(WireErrorCode::Processing, e.what(), true);
    }
    JsonWriter w;
    w.begin_object().field("type", "feedback").key("frame").raw(feedback_to_json(frames_.back())).end_object();
    return w.take();
}

void Connection::finish() {
    if (finished_) return;
    finished_ = true;
    closed_ = true;
    if (counted_) --ctx_.active_sessions;
    if (!engine_ || !ctx_.log_dir) return;
    SessionLog log;
    log.config = engine_->config();
    log.frames = frames_;
    log.summary = engine_->summary(frames_);
    std::error_code ec;
    std::filesystem::create_directories(*ctx_.log_dir, ec);
    std::ofstream out(*ctx_.log_dir / (session_id_ + ".jsonl"), std::ios::binary);
    out << write_log(log, LogFormat::Jsonl);
}

std::string hello_message(std::string_view clip_id, const SessionConfig& cfg,
                          const std::optional<JointMapTable>& user_map) {
    JsonWriter w;
    w.begin_object()
        .field("type", "hello")
        .field("protocol_version", kProtocolVersion)
        .field("instructor_clip_id", clip_id)
        .key("config")
        .raw(session_config_to_json(cfg));
    if (user_map) w.key("map").raw(json::parse(to_json(*user_map)).dump());
    w.end_object();
    return w.take();
}

std::string frame_message(const StreamFrameRecord& record) {
    // {"t":...} -> {"type":"frame","t":...}
    return "{\"type\":\"frame\"," + to_json_line(record).substr(1);
}

std::string bye_message() { return "{\"type\":\"bye\"}"; }

}  // namespace motionguide

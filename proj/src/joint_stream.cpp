#include "motionguide/joint_stream.hpp"

#include <cmath>
#include <unordered_set>

#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

using nlohmann::json;

namespace {

double finite_number(const json& v, std::size_t line, const char* what) {
    if (!v.is_number()) throw ParseError(line, std::string(what) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(line, std::string(what) + " must be finite");
    return d;
}

}  // namespace

StreamFrameRecord stream_record_from_json(const json& obj, std::size_t line) {
    if (!obj.is_object()) throw ParseError(line, "stream record must be a JSON object");
    StreamFrameRecord rec;
    if (!obj.contains("t")) throw ParseError(line, "stream record is missing \"t\"");
    rec.t = finite_number(obj["t"], line, "\"t\"");
    if (rec.t < 0.0) throw ParseError(line, "timestamp must be non-negative");
    if (!obj.contains("joints") || !obj["joints"].is_array())
        throw ParseError(line, "stream record needs a \"joints\" array");
    std::unordered_set<std::string> seen;
    for (const json& j : obj["joints"]) {
        if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
            throw ParseError(line, "joint entry needs a string \"name\"");
        StreamJoint sj;
        sj.name = j["name"].get<std::string>();
        if (!seen.insert(sj.name).second) throw ParseError(line, "joint '" + sj.name + "' repeated in record");
        if (!j.contains("pos") || !j["pos"].is_array() || j["pos"].size() != 3)
            throw ParseError(line, "joint '" + sj.name + "' needs \"pos\": [x, y, z]");
        sj.position = {finite_number(j["pos"][0], line, "pos"), finite_number(j["pos"][1], line, "pos"),
                       finite_number(j["pos"][2], line, "pos")};
        if (!j.contains("rot") || !j["rot"].is_array() || j["rot"].size() != 4)
            throw ParseError(line, "joint '" + sj.name + "' needs \"rot\": [w, x, y, z]");
        const Quat q{finite_number(j["rot"][0], line, "rot"), finite_number(j["rot"][1], line, "rot"),
                     finite_number(j["rot"][2], line, "rot"), finite_number(j["rot"][3], line, "rot")};
        if (q.norm() < 1e-9) throw ParseError(line, "joint '" + sj.name + "' has a zero rotation");
        // Printed quaternions are unit only to the printed precision; renormalizing
        // those would make parse -> print -> parse drift, so leave them as read.
        sj.rotation = std::abs(q.norm() - 1.0) > 1e-8 ? q.normalized() : q;
        if (j.contains("conf") && !j["conf"].is_null()) {
            sj.confidence = finite_number(j["conf"], line, "conf");
            if (sj.confidence < 0.0 || sj.confidence > 1.0)
                throw ParseError(line, "joint '" + sj.name + "' confidence outside [0, 1]");
        }
        rec.joints.push_back(std::move(sj));
    }
    return rec;
}

StreamFrameRecord parse_stream_record(std::string_view text, std::size_t line) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
    return stream_record_from_json(obj, line);
}

std::string to_json_line(const StreamFrameRecord& record) {
    // Finer than the 6-decimal logs: recorded streams feed back into scoring.
    JsonWriter w(10);
    w.begin_object().field("t", record.t).key("joints").begin_array();
    for (const auto& j : record.joints) {
        w.begin_object()
            .field("name", std::string_view(j.name))
            .field("pos", j.position)
            .field("rot", j.rotation)
            .field("conf", j.confidence)
            .end_object();
    }
    w.end_array().end_object();
    return w.take();
}

StreamDecoder::StreamDecoder(Skeleton skeleton) : skeleton_(std::move(skeleton)) {
    local_rot_.assign(skeleton_.size(), Quat{});
    local_off_.resize(skeleton_.size());
    for (std::size_t i = 0; i < skeleton_.size(); ++i) local_off_[i] = skeleton_[i].offset;
}

PoseFrame StreamDecoder::push(const StreamFrameRecord& record, std::size_t line) {
    if (last_t_ && !(record.t > *last_t_))
        throw ParseError(line, "timestamps must be strictly increasing");

    std::vector<const StreamJoint*> by_index(skeleton_.size(), nullptr);
    for (const auto& sj : record.joints) {
        auto idx = skeleton_.find(sj.name);
        if (!idx) throw ParseError(line, "unknown joint '" + sj.name + "'");
        by_index[*idx] = &sj;
    }

    // World transforms of this record, filled root to leaf.
    std::vector<Vec3> world_pos(skeleton_.size());
    std::vector<Quat> world_rot(skeleton_.size());
    for (std::size_t i = 0; i < skeleton_.size(); ++i) {
        const auto parent = skeleton_[i].parent;
        if (!parent) {
            if (by_index[i]) {
                root_ = by_index[i]->position;
                local_rot_[i] = by_index[i]->rotation;
            }
            world_pos[i] = root_;
            world_rot[i] = local_rot_[i];
            continue;
        }
        const Quat inv_parent = world_rot[*parent].inverse();
        if (by_index[i]) {
            local_rot_[i] = (inv_parent * by_index[i]->rotation).normalized();
            local_off_[i] = inv_parent.rotate(by_index[i]->position - world_pos[*parent]);
        }
        world_rot[i] = (world_rot[*parent] * local_rot_[i]).normalized();
        world_pos[i] = world_pos[*parent] + world_rot[*parent].rotate(local_off_[i]);
    }

    if (count_ == 0) {
        std::vector<Joint> joints = skeleton_.joints();
        for (std::size_t i = 1; i < joints.size(); ++i)
            if (local_off_[i].norm() > 1e-6) joints[i].offset = local_off_[i];
        skeleton_ = Skeleton(std::move(joints));
    }

    PoseFrame frame;
    frame.root_position = root_;
    frame.joint_rotations = local_rot_;
    bool overrides = false;
    for (std::size_t i = 1; i < skeleton_.size(); ++i)
        if ((local_off_[i] - skeleton_[i].offset).norm() > 1e-9) overrides = true;
    if (overrides) {
        frame.joint_offsets = local_off_;
        frame.joint_offsets[0] = Vec3{};
    }
    last_t_ = record.t;
    ++count_;
    return frame;
}

MotionClip parse_joint_stream(std::string_view text, const Skeleton& skeleton, double target_fps) {
    if (!(target_fps > 0.0) || !std::isfinite(target_fps)) throw DomainError("target fps must be positive");
    StreamDecoder decoder(skeleton);
    std::vector<double> times;
    std::vector<PoseFrame> decoded;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const StreamFrameRecord rec = parse_stream_record(line, line_no);
        decoded.push_back(decoder.push(rec, line_no));
        times.push_back(rec.t);
    }
    if (decoded.empty()) throw ParseError(line_no, "joint stream has no records");

    const Skeleton& calibrated = decoder.skeleton();
    const double t0 = times.front();
    const double duration = times.back() - t0;
    const auto count = static_cast<std::size_t>(std::floor(duration * target_fps + 1e-3)) + 1;
    const double snap = 1e-3 / target_fps;

    std::vector<PoseFrame> frames;
    frames.reserve(count);
    std::size_t r = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double g = t0 + static_cast<double>(k) / target_fps;
        while (r + 1 < times.size() && times[r + 1] <= g + snap) ++r;
        if (std::abs(times[r] - g) <= snap || r + 1 >= times.size()) {
            frames.push_back(decoded[r]);
            continue;
        }
        const double alpha = (g - times[r]) / (times[r + 1] - times[r]);
        frames.push_back(interpolate_frames(calibrated, decoded[r], decoded[r + 1], alpha));
    }
    return MotionClip(calibrated, std::move(frames), target_fps);
}

std::string write_joint_stream(const MotionClip& clip) {
    std::string out;
    for (std::size_t k = 0; k < clip.frame_count(); ++k) {
        StreamFrameRecord rec;
        rec.t = static_cast<double>(k) / clip.fps();
        for (const JointPose& jp : forward_kinematics(clip.skeleton(), clip.frames()[k]))
            rec.joints.push_back({jp.name, jp.position, jp.rotation, 1.0});
        out += to_json_line(rec);
        out += '\n';
    }
    return out;
}

}  // namespace motionguide

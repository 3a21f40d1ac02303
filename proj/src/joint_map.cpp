#include "motionguide/joint_map.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "motionguide/builtin.hpp"
#include "motionguide/error.hpp"

namespace motionguide {

using nlohmann::json;

std::optional<std::string> JointMapTable::source_for(std::string_view target) const {
    for (const auto& [src, dst] : pairs)
        if (dst == target) return src;
    return std::nullopt;
}

std::optional<std::string> JointMapTable::target_for(std::string_view source) const {
    for (const auto& [src, dst] : pairs)
        if (src == source) return dst;
    return std::nullopt;
}

bool JointMapTable::is_required(std::string_view target) const {
    return std::find(required.begin(), required.end(), target) != required.end();
}

namespace {

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += "'" + n + "'";
    }
    return out;
}

}  // namespace

void validate(const JointMapTable& map) {
    std::set<std::string> sources, targets;
    std::vector<std::string> dup_src, dup_dst, missing;
    for (const auto& [src, dst] : map.pairs) {
        if (!sources.insert(src).second) dup_src.push_back(src);
        if (!targets.insert(dst).second) dup_dst.push_back(dst);
    }
    for (const auto& r : map.required)
        if (!targets.count(r)) missing.push_back(r);

    std::string msg;
    if (!dup_src.empty()) msg += "duplicate source joints: " + join(dup_src) + "; ";
    if (!dup_dst.empty()) msg += "duplicate target joints: " + join(dup_dst) + "; ";
    if (!missing.empty()) msg += "required joints not mapped: " + join(missing) + "; ";
    if (!msg.empty()) {
        msg.resize(msg.size() - 2);
        throw ValidationError("invalid joint map: " + msg);
    }
}

JointMapTable load_joint_map(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("joint map is not valid JSON: ") + e.what());
    }
    JointMapTable map;
    try {
        map.source_skeleton_id = doc.at("source").get<std::string>();
        map.target_skeleton_id = doc.at("target").get<std::string>();
        for (const auto& p : doc.at("pairs")) {
            if (!p.is_array() || p.size() != 2) throw ValidationError("each pair must be [source, target]");
            map.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
        if (doc.contains("required")) map.required = doc.at("required").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("joint map schema: ") + e.what());
    }
    validate(map);
    return map;
}

std::string to_json(const JointMapTable& map) {
    json pairs = json::array();
    for (const auto& [s, d] : map.pairs) pairs.push_back({s, d});
    json doc = {{"source", map.source_skeleton_id},
                {"target", map.target_skeleton_id},
                {"pairs", pairs},
                {"required", map.required}};
    return doc.dump(2);
}

JointMapTable identity_canonical_map() {
    JointMapTable map;
    map.source_skeleton_id = "canonical20";
    map.target_skeleton_id = "canonical20";
    for (auto n : kCanonicalJointNames) map.pairs.emplace_back(std::string(n), std::string(n));
    for (auto j : {CanonicalJoint::Pelvis, CanonicalJoint::Head, CanonicalJoint::LeftHip,
                   CanonicalJoint::RightHip, CanonicalJoint::LeftAnkle, CanonicalJoint::RightAnkle})
        map.required.emplace_back(name_of(j));
    return map;
}

const JointMapTable& default_kinect_map() {
    static const JointMapTable map = load_joint_map(default_kinect_map_json());
    return map;
}

}  // namespace motionguide

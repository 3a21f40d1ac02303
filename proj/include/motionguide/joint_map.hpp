#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace motionguide {

/// Source-skeleton joint names paired with target (canonical) joint names.
struct JointMapTable {
    std::string source_skeleton_id;
    std::string target_skeleton_id;
    std::vector<std::pair<std::string, std::string>> pairs;
    /// Target joints that must be mapped and present at retarget time.
    std::vector<std::string> required;

    std::optional<std::string> source_for(std::string_view target) const;
    std::optional<std::string> target_for(std::string_view source) const;
    bool is_required(std::string_view target) const;

    bool operator==(const JointMapTable&) const = default;
};

/// Checks for duplicate source/target names and unmapped required targets.
/// Throws ValidationError listing every offender.
void validate(const JointMapTable& map);

/// Parses and validates `{"source", "target", "pairs", "required"}`.
/// Throws ParseError on malformed JSON, ValidationError on bad content.
JointMapTable load_joint_map(std::string_view text);

std::string to_json(const JointMapTable& map);

/// Every canonical joint mapped to itself; pelvis, head, hips, ankles required.
JointMapTable identity_canonical_map();

/// The shipped kinect32 -> canonical20 table.
const JointMapTable& default_kinect_map();

}  // namespace motionguide

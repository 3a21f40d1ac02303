#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "motionguide/compare.hpp"
#include "motionguide/navigate.hpp"
#include "motionguide/quality.hpp"
#include "motionguide/session.hpp"

namespace motionguide {

// JSON config files. Missing keys keep their defaults; unknown keys and wrong
// types raise ValidationError so typos do not pass silently. A NavConfig may
// name a "preset" (high_accuracy, fine, coarse) that other keys then override.

CompareConfig compare_config_from_json(const nlohmann::json& j);
NavConfig nav_config_from_json(const nlohmann::json& j);
QualityConfig quality_config_from_json(const nlohmann::json& j);
SessionConfig session_config_from_json(const nlohmann::json& j);

/// Parses text, then dispatches to the matching *_from_json.
nlohmann::json parse_config_text(std::string_view text);

std::string compare_config_to_json(const CompareConfig& cfg);
std::string nav_config_to_json(const NavConfig& cfg);
std::string session_config_to_json(const SessionConfig& cfg);

}  // namespace motionguide

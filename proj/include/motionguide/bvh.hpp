#pragma once

#include <string>
#include <string_view>

#include "motionguide/skeleton.hpp"

namespace motionguide {

struct BvhOptions {
    /// Multiplier from file units to meters (BVH corpora are mostly centimeters).
    double scale = 0.01;
};

/// Parses a BVH document. Euler channels are composed in their declared order;
/// rotations come back sign-canonical. A Frame Time within 1e-4 (relative) of
/// an integer rate is snapped to it. Throws ParseError carrying the line.
MotionClip parse_bvh(std::string_view text, const BvhOptions& options = {});

/// Writes BVH with ZXY rotation channels, 6-decimal values and a 7-decimal
/// Frame Time. Joints gain position channels when any frame overrides offsets.
std::string serialize_bvh(const MotionClip& clip, const BvhOptions& options = {});

/// Reads a file and parses it; the error message names the path.
MotionClip load_bvh_file(const std::string& path, const BvhOptions& options = {});

}  // namespace motionguide

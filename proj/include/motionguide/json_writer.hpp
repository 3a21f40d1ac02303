#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "motionguide/math.hpp"

namespace motionguide {

/// Fixed-point text for `v` with `decimals` digits; never prints "-0.000...".
std::string format_fixed(double v, int decimals = 6);

/// Compact JSON emitter with caller-controlled field order and fixed-point
/// reals, so equal values always produce equal bytes.
class JsonWriter {
public:
    explicit JsonWriter(int decimals = 6) : decimals_(decimals) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null();
    JsonWriter& value(const Vec3& v);
    JsonWriter& value(const Quat& q);
    /// Splices already-serialized JSON.
    JsonWriter& raw(std::string_view json);

    template <typename T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

    const std::string& str() const noexcept { return out_; }
    std::string take() { return std::move(out_); }

private:
    void separate();

    std::string out_;
    std::vector<bool> first_;  // one entry per open container
    bool after_key_ = false;
    int decimals_;
};

std::string json_escape(std::string_view s);

}  // namespace motionguide

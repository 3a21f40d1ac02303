#pragma once

#include <cmath>

namespace motionguide {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double squared_norm() const { return dot(*this); }
    Vec3 normalized() const;
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

// Axis conventions: right-handed, Y up, Z forward, meters.
inline constexpr Vec3 kUp{0.0, 1.0, 0.0};
inline constexpr Vec3 kForward{0.0, 0.0, 1.0};

/// Rotation quaternion (w + xi + yj + zk). Operations that produce rotations
/// return unit quaternions; `Quat{}` is the identity.
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quat identity() { return {}; }
    /// `axis` need not be normalized; angle in radians.
    static Quat from_axis_angle(const Vec3& axis, double angle);
    /// Rotation about the vertical axis.
    static Quat from_yaw(double angle) { return from_axis_angle(kUp, angle); }

    constexpr Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }
    constexpr Quat operator-() const { return {-w, -x, -y, -z}; }
    constexpr bool operator==(const Quat&) const = default;

    constexpr Quat conjugate() const { return {w, -x, -y, -z}; }
    /// Inverse of a unit quaternion.
    constexpr Quat inverse() const { return conjugate(); }
    constexpr double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Quat normalized() const;
    bool is_unit(double tol = 1e-6) const { return std::abs(norm() - 1.0) <= tol; }
    bool is_finite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    Vec3 rotate(const Vec3& v) const;

    /// Sign-canonical representative of the same rotation: w > 0, or the first
    /// non-zero component positive when w == 0.
    Quat canonical() const;

    /// Twist about the vertical axis (swing-twist decomposition), as a yaw angle.
    double yaw() const;

    /// Angle of the rotation in [0, pi].
    double angle() const;
};

/// Spherical linear interpolation along the shortest arc. Throws DomainError
/// when `t` is outside [0, 1].
Quat slerp(const Quat& a, const Quat& b, double t);

/// Angle between two rotations in [0, pi].
double angular_distance(const Quat& a, const Quat& b);

/// Euler rotation composed in channel order: for order "ZXY" the result is
/// Rz(a0) * Rx(a1) * Ry(a2). Angles in radians.
Quat from_euler(const char order[3], const double angles[3]);
/// Inverse of `from_euler` for the same order; returns radians.
void to_euler(const Quat& q, const char order[3], double angles[3]);

struct RigidTransform {
    Quat rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
    Quat apply(const Quat& q) const { return (rotation * q).normalized(); }
    /// (a * b).apply(p) == a.apply(b.apply(p)).
    RigidTransform operator*(const RigidTransform& o) const {
        return {(rotation * o.rotation).normalized(), rotation.rotate(o.translation) + translation};
    }
    RigidTransform inverse() const {
        const Quat inv = rotation.inverse();
        return {inv, -inv.rotate(translation)};
    }
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg_to_rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace motionguide

#include "motionguide/math.hpp"

#include <algorithm>
#include <array>

#include "motionguide/error.hpp"

namespace motionguide {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 to_matrix(const Quat& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

int axis_index(char c) {
    switch (c) {
        case 'X': case 'x': return 0;
        case 'Y': case 'y': return 1;
        case 'Z': case 'z': return 2;
        default: throw DomainError(std::string("unknown rotation axis '") + c + "'");
    }
}

Vec3 unit_axis(int i) {
    Vec3 v;
    (i == 0 ? v.x : i == 1 ? v.y : v.z) = 1.0;
    return v;
}

}  // namespace

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) return *this;
    return *this / n;
}

Quat Quat::from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    const double s = std::sin(angle / 2.0);
    return Quat{std::cos(angle / 2.0), a.x * s, a.y * s, a.z * s};
}

Quat Quat::normalized() const {
    const double n = norm();
    if (n == 0.0) return identity();
    return {w / n, x / n, y / n, z / n};
}

Vec3 Quat::rotate(const Vec3& v) const {
    // v' = v + 2w(u x v) + 2u x (u x v)
    const Vec3 u{x, y, z};
    const Vec3 t = u.cross(v) * 2.0;
    return v + t * w + u.cross(t);
}

Quat Quat::canonical() const {
    for (double c : {w, x, y, z}) {
        if (c > 0.0) return *this;
        if (c < 0.0) return -*this;
    }
    return *this;
}

double Quat::yaw() const {
    if (w == 0.0 && y == 0.0) return 0.0;
    double a = 2.0 * std::atan2(y, w);
    if (a > kPi) a -= 2.0 * kPi;
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

double Quat::angle() const {
    const Quat q = normalized();
    return 2.0 * std::atan2(Vec3{q.x, q.y, q.z}.norm(), std::abs(q.w));
}

Quat slerp(const Quat& a, const Quat& b, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("slerp parameter outside [0, 1]");
    if (t == 0.0) return a.normalized();
    Quat end = b;
    double cos_theta = a.dot(b);
    if (cos_theta < 0.0) {
        end = -b;
        cos_theta = -cos_theta;
    }
    if (t == 1.0) return end.normalized();
    if (cos_theta > 0.9999995) {
        const Quat q{a.w + (end.w - a.w) * t, a.x + (end.x - a.x) * t, a.y + (end.y - a.y) * t,
                     a.z + (end.z - a.z) * t};
        return q.normalized();
    }
    const double theta = std::acos(std::min(cos_theta, 1.0));
    const double sin_theta = std::sin(theta);
    const double wa = std::sin((1.0 - t) * theta) / sin_theta;
    const double wb = std::sin(t * theta) / sin_theta;
    return Quat{wa * a.w + wb * end.w, wa * a.x + wb * end.x, wa * a.y + wb * end.y,
                wa * a.z + wb * end.z}
        .normalized();
}

double angular_distance(const Quat& a, const Quat& b) { return (a.inverse() * b).angle(); }

Quat from_euler(const char order[3], const double angles[3]) {
    Quat q;
    for (int i = 0; i < 3; ++i) q = q * Quat::from_axis_angle(unit_axis(axis_index(order[i])), angles[i]);
    return q.normalized();
}

void to_euler(const Quat& q, const char order[3], double angles[3]) {
    const int i = axis_index(order[0]);
    const int j = axis_index(order[1]);
    const int k = axis_index(order[2]);
    if (i == j || j == k || i == k) throw DomainError("Euler order must use three distinct axes");
    // +1 for cyclic orders (XYZ, YZX, ZXY), -1 otherwise.
    const double s = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
    const Mat3 m = to_matrix(q.normalized());

    const double sin_mid = std::clamp(s * m[i][k], -1.0, 1.0);
    const double mid = std::asin(sin_mid);
    double first = 0.0;
    double last = 0.0;
    if (std::abs(sin_mid) < 1.0 - 1e-12) {
        first = std::atan2(-s * m[j][k], m[k][k]);
        last = std::atan2(-s * m[i][j], m[i][i]);
    } else {
        // Gimbal lock: fold everything into the first angle. N = M * R_j(mid)^T = R_i(first).
        const Mat3 rj = to_matrix(Quat::from_axis_angle(unit_axis(j), -mid));
        Mat3 n{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                for (int e = 0; e < 3; ++e) n[r][c] += m[r][e] * rj[e][c];
        first = std::atan2(s * n[k][j], n[j][j]);
    }
    angles[0] = first;
    angles[1] = mid;
    angles[2] = last;
}

}  // namespace motionguide

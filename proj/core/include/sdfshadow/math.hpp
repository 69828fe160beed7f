#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace sdfshadow {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    static constexpr Vec3 splat(double s) { return {s, s, s}; }

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
constexpr Vec3 mul(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
constexpr Vec3 div(const Vec3& a, const Vec3& b) { return {a.x / b.x, a.y / b.y, a.z / b.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalize(const Vec3& a) { return a / length(a); }
constexpr Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
constexpr Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
constexpr double max_component(const Vec3& a) { return std::max({a.x, a.y, a.z}); }
constexpr double min_component(const Vec3& a) { return std::min({a.x, a.y, a.z}); }

/// Axis-aligned box. A default-constructed box is empty (lo > hi).
struct Box3 {
    Vec3 lo = Vec3::splat(kInfinity);
    Vec3 hi = Vec3::splat(-kInfinity);

    constexpr Box3() = default;
    constexpr Box3(const Vec3& lo_, const Vec3& hi_) : lo(lo_), hi(hi_) {}

    constexpr bool empty() const { return lo.x > hi.x || lo.y > hi.y || lo.z > hi.z; }
    constexpr Vec3 extent() const { return hi - lo; }
    constexpr Vec3 center() const { return (lo + hi) * 0.5; }
    constexpr void expand(const Vec3& p) { lo = min(lo, p); hi = max(hi, p); }
    constexpr void expand(const Box3& b) { lo = min(lo, b.lo); hi = max(hi, b.hi); }
    constexpr bool contains(const Vec3& p, double slack = 0.0) const {
        return p.x >= lo.x - slack && p.y >= lo.y - slack && p.z >= lo.z - slack &&
               p.x <= hi.x + slack && p.y <= hi.y + slack && p.z <= hi.z + slack;
    }
    constexpr bool contains(const Box3& b, double slack = 0.0) const {
        return contains(b.lo, slack) && contains(b.hi, slack);
    }
    int longest_axis() const {
        const Vec3 e = extent();
        return e.x >= e.y && e.x >= e.z ? 0 : (e.y >= e.z ? 1 : 2);
    }
    double diagonal() const { return length(extent()); }

    friend constexpr bool operator==(const Box3&, const Box3&) = default;
};

/// Row-major 3x4 affine transform: p' = L p + t.
struct Affine3 {
    std::array<double, 12> m{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};

    static Affine3 identity() { return {}; }
    static Affine3 translation(const Vec3& t) {
        Affine3 a;
        a.m[3] = t.x; a.m[7] = t.y; a.m[11] = t.z;
        return a;
    }
    static Affine3 scale(const Vec3& s) {
        Affine3 a;
        a.m[0] = s.x; a.m[5] = s.y; a.m[10] = s.z;
        return a;
    }
    static Affine3 scale(double s) { return scale(Vec3::splat(s)); }
    static Affine3 rotation_y(double radians) {
        const double c = std::cos(radians), s = std::sin(radians);
        Affine3 a;
        a.m = {c, 0, s, 0, 0, 1, 0, 0, -s, 0, c, 0};
        return a;
    }

    Vec3 apply(const Vec3& p) const {
        return {m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3],
                m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7],
                m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11]};
    }

    /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
    friend Affine3 operator*(const Affine3& a, const Affine3& b) {
        Affine3 r;
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 4; ++col) {
                double v = col == 3 ? a.m[row * 4 + 3] : 0.0;
                for (int k = 0; k < 3; ++k) v += a.m[row * 4 + k] * b.m[k * 4 + col];
                r.m[row * 4 + col] = v;
            }
        }
        return r;
    }
};

/// Orthonormal basis with `w` as the third axis.
struct Frame {
    Vec3 u, v, w;

    static Frame from_axis(const Vec3& axis) {
        const Vec3 w = normalize(axis);
        const Vec3 helper = std::abs(w.x) > 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
        const Vec3 u = normalize(cross(helper, w));
        return {u, cross(w, u), w};
    }
    Vec3 to_world(const Vec3& local) const { return u * local.x + v * local.y + w * local.z; }
};

}  // namespace sdfshadow

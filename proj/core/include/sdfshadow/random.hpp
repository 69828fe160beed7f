#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "sdfshadow/math.hpp"

namespace sdfshadow {

/// SplitMix64 finalizer; used to derive independent stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

/// Small counter-based generator. Cheap to construct per texel or pixel, so
/// every work item owns a stream keyed by its index, which keeps parallel
/// results independent of scheduling. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t key) : state_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Uniform direction on the unit sphere (z = 1 - 2u, phi = 2 pi v).
inline Vec3 uniform_sphere(double u, double v) {
    const double z = 1.0 - 2.0 * u;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * v;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Uniform point on the unit disc (polar, area-preserving).
inline Vec3 uniform_disc(double u, double v) {
    const double r = std::sqrt(u);
    const double phi = 2.0 * kPi * v;
    return {r * std::cos(phi), r * std::sin(phi), 0.0};
}

/// Uniform direction inside a cone of half-angle `half_angle` around +z.
inline Vec3 uniform_cone(double u, double v, double half_angle) {
    const double cos_max = std::cos(half_angle);
    const double z = 1.0 - u * (1.0 - cos_max);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * v;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace sdfshadow

#pragma once

#include <cmath>

#include "sdfshadow/math.hpp"

namespace sdfshadow {

/// Either a directional light with an angular radius (a disc at infinity) or
/// a finite disc area light.
struct Light {
    enum class Kind { directional, disc };

    Kind kind = Kind::directional;
    Vec3 direction{0, 1, 0};      // directional: unit vector toward the light
    double angular_radius = 0.05; // directional: half-angle in radians
    Vec3 center{0, 0, 0};         // disc
    Vec3 normal{0, -1, 0};        // disc, facing the scene
    double radius = 0.0;          // disc
    double intensity = 1.0;

    static Light directional_light(const Vec3& toward, double angular_radius, double intensity = 1.0) {
        Light l;
        l.direction = normalize(toward);
        l.angular_radius = angular_radius;
        l.intensity = intensity;
        return l;
    }
    static Light disc_light(const Vec3& center, const Vec3& normal, double radius, double intensity = 1.0) {
        Light l;
        l.kind = Kind::disc;
        l.center = center;
        l.normal = normalize(normal);
        l.radius = radius;
        l.intensity = intensity;
        return l;
    }

    /// Unit direction from p toward the light center.
    Vec3 direction_from(const Vec3& p) const { return kind == Kind::directional ? direction : normalize(center - p); }
    /// Distance to the light center (infinite for directional lights).
    double distance_from(const Vec3& p) const { return kind == Kind::directional ? kInfinity : length(center - p); }
    /// Half-angle the light subtends as seen from p.
    double angle_from(const Vec3& p) const {
        return kind == Kind::directional ? angular_radius : std::atan2(radius, length(center - p));
    }

    struct Sample {
        Vec3 direction;
        double distance;
    };
    /// Uniform sample over the light's extent seen from p.
    Sample sample_from(const Vec3& p, double u, double v) const;
};

}  // namespace sdfshadow

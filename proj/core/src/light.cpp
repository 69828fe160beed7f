#include "sdfshadow/light.hpp"

#include "sdfshadow/random.hpp"

namespace sdfshadow {

Light::Sample Light::sample_from(const Vec3& p, double u, double v) const {
    if (kind == Kind::directional) {
        const Frame frame = Frame::from_axis(direction);
        return {normalize(frame.to_world(uniform_cone(u, v, angular_radius))), kInfinity};
    }
    const Frame frame = Frame::from_axis(normal);
    const Vec3 local = uniform_disc(u, v) * radius;
    const Vec3 target = center + frame.u * local.x + frame.v * local.y;
    const Vec3 to = target - p;
    const double dist = length(to);
    return {to / dist, dist};
}

}  // namespace sdfshadow

#include "sdfshadow/raymarch.hpp"

#include <algorithm>

#include "sdfshadow/error.hpp"

namespace sdfshadow {

MarchParams MarchParams::for_field(const GridSpec& fine) {
    MarchParams p;
    p.epsilon = fine.max_cell_size();
    p.t_max = fine.bounds.diagonal();
    return p;
}

void MarchParams::validate(const GridSpec& field) const {
    if (!(epsilon >= field.max_cell_size() * (1.0 - 1e-9))) {
        throw ConfigError("epsilon must be at least one cell of the marched field (" +
                          std::to_string(field.max_cell_size()) + ")");
    }
    if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
    if (!(max_step > 0.0)) throw ConfigError("max_step must be positive");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(jitter >= 0.0 && jitter < 1.0)) throw ConfigError("jitter must lie in [0, 1)");
    if (!(surface_offset >= 0.0)) throw ConfigError("surface_offset must be non-negative");
    if (!(light_angle > 0.0 && light_angle < kPi / 2)) throw ConfigError("light_angle must lie in (0, pi/2)");
}

MarchResult sphere_trace(const DistanceField& field, const Vec3& origin, const Vec3& direction,
                         const MarchParams& params, const MarchObserver& observer) {
    MarchResult result;
    if (!field.grid.bounds.contains(origin)) return result;
    double t = 0.0;
    for (int it = 0; it < params.max_iterations; ++it) {
        const FieldSample s = sample_trilinear(field, origin + direction * t);
        result.iterations = it + 1;
        result.t = t;
        if (!s.in_bounds) return result;
        if (observer) observer(t, s.value);
        if (s.value <= params.epsilon) {
            result.status = MarchStatus::hit;
            result.occlusion = 1.0;
            return result;
        }
        t += std::min(s.value, params.max_step);
        if (t > params.t_max) {
            result.t = t;
            return result;
        }
    }
    result.status = MarchStatus::miss_max_iterations;
    result.t = t;
    return result;
}

ClosestApproach triangulate(double d_prev, double d, double t) {
    if (!(d_prev > 0.0) || d >= d_prev) return {d, t};
    const double y = d * d / (2.0 * d_prev);
    const double t_est = t - y;
    if (!(t_est > 0.0)) return {d, t};
    return {std::sqrt(std::max(0.0, d * d - y * y)), t_est};
}

double soft_shadow(const DistanceField& field, const Vec3& surface_point, const Vec3& normal, const Vec3& light_dir,
                   const MarchParams& params, Rng* rng) {
    const Vec3 origin = surface_point + normal * (params.surface_offset * params.epsilon + field.beta + field.bias);
    const double k = params.hardness();
    const double step_unit = std::isfinite(params.max_step) ? params.max_step : params.epsilon;
    double t = rng && params.jitter > 0.0 ? params.jitter * step_unit * rng->uniform() : 0.0;
    double d_prev = kInfinity;
    double min_term = 1.0;
    for (int it = 0; it < params.max_iterations; ++it) {
        const FieldSample s = sample_trilinear(field, origin + light_dir * t);
        if (!s.in_bounds) break;
        const double d = s.value;
        if (d <= params.epsilon) return 1.0;
        if (t > 0.0) {
            const ClosestApproach e = params.triangulate ? triangulate(d_prev, d, t) : ClosestApproach{d, t};
            min_term = std::min(min_term, std::clamp(k * e.distance / e.t, 0.0, 1.0));
        }
        d_prev = d;
        t += std::min(d, params.max_step);
        if (t > params.t_max) break;
    }
    return 1.0 - min_term;
}

double simulate_umbra(const DistanceField& field, const Vec3& surface_point, const Vec3& normal, const Light& light,
                      int samples, const MarchParams& params, Rng& rng) {
    if (samples < 1) throw ConfigError("umbra simulation needs at least one sample");
    if (samples == 1) return soft_shadow(field, surface_point, normal, light.direction_from(surface_point), params, &rng);
    MarchParams narrow = params;
    narrow.light_angle = std::atan(std::tan(params.light_angle) / std::sqrt(static_cast<double>(samples)));
    double total = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double u = rng.uniform(), v = rng.uniform();
        const Light::Sample ls = light.sample_from(surface_point, u, v);
        total += soft_shadow(field, surface_point, normal, ls.direction, narrow, &rng);
    }
    return total / samples;
}

}  // namespace sdfshadow

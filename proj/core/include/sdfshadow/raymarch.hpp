#pragma once

#include <cstdint>
#include <functional>

#include "sdfshadow/field.hpp"
#include "sdfshadow/light.hpp"
#include "sdfshadow/random.hpp"

namespace sdfshadow {

/// Default step cap and iteration budget for shadow marching.
inline constexpr double kDefaultMaxStep = 0.05;
inline constexpr int kDefaultMaxIterations = 256;

struct MarchParams {
    double epsilon = 0.0;        // surface threshold, at least one fine cell
    int max_iterations = kDefaultMaxIterations;
    double max_step = kDefaultMaxStep;  // +inf disables the cap
    double t_max = kInfinity;    // scene-bounds exit distance
    double jitter = 0.0;         // start-offset jitter in [0, 1) step units
    double light_angle = 0.05;   // penumbra cone half-angle (radians)
    bool triangulate = true;     // two-sample closest-approach estimate
    double surface_offset = 3.0; // shadow-ray start height above the receiver in epsilons, on top of beta + bias

    /// Defaults tied to a fine field: epsilon = largest cell edge, t_max = bounds diagonal.
    static MarchParams for_field(const GridSpec& fine);
    /// Throws ConfigError if epsilon is below the field's cell size or other
    /// values are out of range.
    void validate(const GridSpec& field) const;

    /// Penumbra hardness k = 1 / tan(light_angle).
    double hardness() const { return 1.0 / std::tan(light_angle); }
};

enum class MarchStatus { hit, miss_exited, miss_max_iterations };

struct MarchResult {
    MarchStatus status = MarchStatus::miss_exited;
    double t = 0;
    int iterations = 0;
    double occlusion = 0;  // 1 on hit for shadow queries
};

/// Called with (t, sampled value) for every field sample a march takes.
using MarchObserver = std::function<void(double, double)>;

/// Steps by min(sample, max_step) until the sample is <= epsilon (hit), the
/// ray leaves the field or passes t_max (miss_exited), or the iteration
/// budget runs out.
MarchResult sphere_trace(const DistanceField& field, const Vec3& origin, const Vec3& direction,
                         const MarchParams& params, const MarchObserver& observer = {});

/// Single-ray cone occlusion toward a light. The ray starts at
/// surface_point + (surface_offset * epsilon + field.beta + field.bias) * normal, offset
/// further along the ray by a random fraction `jitter` of a step when `rng`
/// is given. Returns 1 on a hit, else
/// 1 - min over steps of clamp(k * D_est / t_est, 0, 1).
double soft_shadow(const DistanceField& field, const Vec3& surface_point, const Vec3& normal, const Vec3& light_dir,
                   const MarchParams& params, Rng* rng = nullptr);

/// Shortest distance to the surface estimated between two consecutive march
/// samples (distance d_prev, then d at parameter t). Falls back to (d, t) when
/// the estimate is not defined. Returns {distance, parameter}.
struct ClosestApproach {
    double distance;
    double t;
};
ClosestApproach triangulate(double d_prev, double d, double t);

/// Experimental umbra estimate: averages soft_shadow over `samples` directions
/// toward points on the light, each with a cone 1/sqrt(samples) as wide.
/// samples == 1 marches once toward the light center.
double simulate_umbra(const DistanceField& field, const Vec3& surface_point, const Vec3& normal, const Light& light,
                      int samples, const MarchParams& params, Rng& rng);

}  // namespace sdfshadow

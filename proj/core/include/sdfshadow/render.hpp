#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdfshadow/field.hpp"
#include "sdfshadow/image.hpp"
#include "sdfshadow/raymarch.hpp"
#include "sdfshadow/scene.hpp"

namespace sdfshadow {

/// Per-pixel surface attributes from primary visibility.
struct GBuffer {
    int width = 0, height = 0;
    std::vector<Vec3> position;
    std::vector<Vec3> normal;   // geometric, flipped to face the camera
    std::vector<float> albedo;
    std::vector<std::uint8_t> coverage;

    std::size_t size() const { return coverage.size(); }
};

/// Closest-hit ray casting through the BVH, one ray per pixel center.
GBuffer rasterize_gbuffer(const Camera& camera, const BvhIndex& bvh, const std::vector<double>& albedos);
inline GBuffer rasterize_gbuffer(const Scene& scene, const FrameGeometry& geometry) {
    return rasterize_gbuffer(scene.camera, geometry.bvh, scene.albedos());
}

struct ShadeParams {
    MarchParams march;
    int jitter_draws = 4;             // soft_shadow evaluations averaged per pixel and light
    std::uint64_t seed = 1;
    bool hard_shadow_fallback = false;  // max(sdf occlusion, exact hard shadow)
    const BvhIndex* bvh = nullptr;    // required by the hard-shadow fallback
    double background = 0.0;
};

/// Lambertian direct light, each light attenuated by (1 - occlusion) from
/// soft_shadow against `field`. Light angle in `params.march` is replaced by
/// each light's own angle. Sky pixels take `params.background`.
ScalarImage shade(const GBuffer& gbuffer, const DistanceField& field, const std::vector<Light>& lights,
                  const ShadeParams& params);

/// Same shading with per-pixel occlusion returned alongside (first light only).
struct ShadeOutput {
    ScalarImage radiance;
    ScalarImage occlusion;
};
ShadeOutput shade_with_occlusion(const GBuffer& gbuffer, const DistanceField& field, const std::vector<Light>& lights,
                                 const ShadeParams& params);

/// Lambert shading without any shadowing.
ScalarImage unshadowed(const GBuffer& gbuffer, const std::vector<Light>& lights, double background = 0.0);

/// Distributed ray tracing: visibility is the unoccluded fraction of `spp`
/// BVH shadow rays toward uniform samples of each light.
ShadeOutput reference_render(const GBuffer& gbuffer, const BvhIndex& bvh, const std::vector<Light>& lights, int spp,
                             std::uint64_t seed, double background = 0.0);

/// Shadow-ray origin offset used by the reference renderer.
inline constexpr double kShadowRayOffset = 1e-6;

struct ImageMetrics {
    double rmse = 0;
    double mae = 0;
    double max_error = 0;
    std::size_t pixels = 0;
};

/// Metrics over pixels where `mask` is nonzero (all pixels when absent).
ImageMetrics compare(const ScalarImage& a, const ScalarImage& b, const std::vector<std::uint8_t>* mask = nullptr);

}  // namespace sdfshadow

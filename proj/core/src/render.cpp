#include "sdfshadow/render.hpp"

#include <algorithm>
#include <cmath>

#include "sdfshadow/error.hpp"
#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

namespace {

constexpr std::uint64_t kShadeStream = 0x5348414445ull;
constexpr std::uint64_t kReferenceStream = 0x524546ull;

double lambert(const Vec3& n, const Light& light, const Vec3& p) {
    return light.intensity * std::max(0.0, dot(n, light.direction_from(p)));
}

}  // namespace

GBuffer rasterize_gbuffer(const Camera& camera, const BvhIndex& bvh, const std::vector<double>& albedos) {
    if (camera.width < 1 || camera.height < 1) throw ConfigError("camera image must be at least 1x1");
    GBuffer g;
    g.width = camera.width;
    g.height = camera.height;
    const std::size_t n = static_cast<std::size_t>(g.width) * g.height;
    g.position.assign(n, Vec3{});
    g.normal.assign(n, Vec3{});
    g.albedo.assign(n, 0.0f);
    g.coverage.assign(n, 0);
    parallel_for(0, n, 256, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const int x = static_cast<int>(i % g.width), y = static_cast<int>(i / g.width);
            const Ray ray = camera.primary_ray(x + 0.5, y + 0.5);
            const auto hit = bvh.ray_query(ray.origin, ray.direction, kInfinity);
            if (!hit) continue;
            Vec3 nrm = bvh.normal(hit->triangle);
            if (dot(nrm, ray.direction) > 0) nrm = -nrm;
            g.position[i] = ray.origin + ray.direction * hit->t;
            g.normal[i] = nrm;
            const std::uint32_t tag = bvh.tag(hit->triangle);
            g.albedo[i] = static_cast<float>(tag < albedos.size() ? albedos[tag] : 0.8);
            g.coverage[i] = 1;
        }
    });
    return g;
}

ShadeOutput shade_with_occlusion(const GBuffer& g, const DistanceField& field, const std::vector<Light>& lights,
                                 const ShadeParams& params) {
    if (params.jitter_draws < 1) throw ConfigError("jitter_draws must be positive");
    if (params.hard_shadow_fallback && !params.bvh) throw ConfigError("hard-shadow fallback needs a BVH");
    ShadeOutput out{make_image(g.width, g.height, static_cast<float>(params.background)),
                    make_image(g.width, g.height, 0.0f)};
    parallel_for(0, g.size(), 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!g.coverage[i]) continue;
            const Vec3& p = g.position[i];
            const Vec3& n = g.normal[i];
            double radiance = 0.0;
            for (std::size_t l = 0; l < lights.size(); ++l) {
                const Light& light = lights[l];
                const double e = lambert(n, light, p);
                double occ = 0.0;
                if (e > 0.0) {
                    MarchParams mp = params.march;
                    mp.light_angle = light.angle_from(p);
                    const Vec3 dir = light.direction_from(p);
                    if (mp.jitter > 0.0) {
                        Rng rng(stream_key(params.seed ^ kShadeStream, i, l));
                        for (int k = 0; k < params.jitter_draws; ++k) occ += soft_shadow(field, p, n, dir, mp, &rng);
                        occ /= params.jitter_draws;
                    } else {
                        occ = soft_shadow(field, p, n, dir, mp);
                    }
                    if (params.hard_shadow_fallback &&
                        params.bvh->occluded(p + n * kShadowRayOffset, dir, light.distance_from(p))) {
                        occ = 1.0;
                    }
                }
                if (l == 0) out.occlusion.pixels[i] = static_cast<float>(occ);
                radiance += e * (1.0 - occ);
            }
            out.radiance.pixels[i] = static_cast<float>(g.albedo[i] * radiance);
        }
    });
    return out;
}

ScalarImage shade(const GBuffer& g, const DistanceField& field, const std::vector<Light>& lights,
                  const ShadeParams& params) {
    return shade_with_occlusion(g, field, lights, params).radiance;
}

ScalarImage unshadowed(const GBuffer& g, const std::vector<Light>& lights, double background) {
    ScalarImage img = make_image(g.width, g.height, static_cast<float>(background));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.coverage[i]) continue;
        double r = 0.0;
        for (const Light& l : lights) r += lambert(g.normal[i], l, g.position[i]);
        img.pixels[i] = static_cast<float>(g.albedo[i] * r);
    }
    return img;
}

ShadeOutput reference_render(const GBuffer& g, const BvhIndex& bvh, const std::vector<Light>& lights, int spp,
                             std::uint64_t seed, double background) {
    if (spp < 1) throw ConfigError("spp must be at least 1");
    ShadeOutput out{make_image(g.width, g.height, static_cast<float>(background)), make_image(g.width, g.height, 0.0f)};
    parallel_for(0, g.size(), 16, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!g.coverage[i]) continue;
            const Vec3& p = g.position[i];
            const Vec3& n = g.normal[i];
            const Vec3 origin = p + n * kShadowRayOffset;
            double radiance = 0.0;
            for (std::size_t l = 0; l < lights.size(); ++l) {
                const Light& light = lights[l];
                const double e = lambert(n, light, p);
                Rng rng(stream_key(seed ^ kReferenceStream, i, l));
                int blocked = 0;
                for (int s = 0; s < spp; ++s) {
                    const double u = rng.uniform(), v = rng.uniform();
                    const Light::Sample ls = light.sample_from(p, u, v);
                    if (bvh.occluded(origin, ls.direction, ls.distance)) ++blocked;
                }
                const double occ = static_cast<double>(blocked) / spp;
                if (l == 0) out.occlusion.pixels[i] = static_cast<float>(occ);
                radiance += e * (1.0 - occ);
            }
            out.radiance.pixels[i] = static_cast<float>(g.albedo[i] * radiance);
        }
    });
    return out;
}

ImageMetrics compare(const ScalarImage& a, const ScalarImage& b, const std::vector<std::uint8_t>* mask) {
    if (a.width != b.width || a.height != b.height) {
        throw UsageError("image dimensions differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                         " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
    if (mask && mask->size() != a.pixels.size()) throw UsageError("mask size does not match the images");
    ImageMetrics m;
    double sq = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        const double d = std::abs(static_cast<double>(a.pixels[i]) - b.pixels[i]);
        sq += d * d;
        abs_sum += d;
        m.max_error = std::max(m.max_error, d);
        ++m.pixels;
    }
    if (m.pixels > 0) {
        m.rmse = std::sqrt(sq / m.pixels);
        m.mae = abs_sum / m.pixels;
    }
    return m;
}

}  // namespace sdfshadow

#include "sdfshadow/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "sdfshadow/error.hpp"

namespace sdfshadow {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

Dims cube(int n) { return {n, n, n}; }

}  // namespace

std::vector<SizePreset> size_presets() {
    return {{"S", cube(64), cube(128)}, {"M", cube(128), cube(256)}, {"L", cube(256), cube(512)}};
}

SizePreset size_preset(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (const auto& p : size_presets()) {
        if (p.name == upper) return p;
    }
    throw UsageError("unknown size '" + name + "' (expected S, M or L)");
}

void PipelineConfig::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (coarse[a] < 2) throw ConfigError("coarse dims must be at least 2 per axis");
        if (coarse[a] > SeedGrid::kMaxAxisCells) throw ConfigError("coarse dims exceed 1024 per axis");
        if (fine[a] < coarse[a] || fine[a] % coarse[a] != 0) {
            throw ConfigError("fine dims must be integer multiples of the coarse dims");
        }
    }
    sampling.validate();
    if (beta && !(*beta >= 0.0)) throw ConfigError("beta must be non-negative");
    if (!(bias >= 0.0)) throw ConfigError("bias must be non-negative");
}

Pipeline::Pipeline(Scene scene, PipelineConfig config)
    : scene_(std::move(scene)), config_(config), builder_(GridSpec{config.fine, scene_.bounds}, config.sampling) {
    config_.validate();
    scene_.validate(0);
    beta_ = config_.beta ? *config_.beta : default_beta(coarse_grid());
    if (!std::isfinite(config_.sampling.t_max)) {
        SamplingParams p = config_.sampling;
        p.t_max = scene_.bounds.diagonal();
        builder_.set_params(p);
    }
}

const FrameGeometry& Pipeline::geometry() const {
    if (!geometry_) throw InvariantError("no frame has been built yet");
    return *geometry_;
}

PassTimings Pipeline::step(std::uint64_t frame) {
    if (geometry_ && frame <= frame_) throw InvariantError("frames must be stepped in increasing order");
    PassTimings t;
    t.frame = frame;
    const bool rebuild = !geometry_ || scene_.animated() || config_.recompute_static;
    if (rebuild) {
        auto start = Clock::now();
        if (!geometry_ || scene_.animated()) geometry_ = std::make_shared<FrameGeometry>(scene_.mesh_at(frame));
        voxels_ = voxelize(geometry_->mesh, config_.coarse, scene_.bounds);
        t.voxelize_ns = elapsed_ns(start);
        start = Clock::now();
        coarse_ = seeds_to_sdf(jfa_run(voxels_), beta_);
        t.flood_ns = elapsed_ns(start);
    }
    coarse_.frame = frame;
    FineUpdateStats stats;
    const auto start = Clock::now();
    builder_.update(coarse_, geometry_->bvh, frame, &stats);
    t.sample_ns = elapsed_ns(start);
    t.masked_texels = stats.masked_texels;
    t.rays_traced = stats.rays_traced;
    frame_ = frame;
    return t;
}

DistanceField Pipeline::fine() const { return apply_bias(builder_.field(), config_.bias); }

ShadeOutput Pipeline::render(const DistanceField& field, const ShadeParams& params, PassTimings* timings) const {
    const auto start = Clock::now();
    const GBuffer g = rasterize_gbuffer(scene_, geometry());
    ShadeOutput out = shade_with_occlusion(g, field, scene_.lights, params);
    if (timings) timings->lighting_ns = elapsed_ns(start);
    return out;
}

}  // namespace sdfshadow

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sdfshadow/field.hpp"
#include "sdfshadow/jfa.hpp"
#include "sdfshadow/raysample.hpp"
#include "sdfshadow/render.hpp"
#include "sdfshadow/scene.hpp"
#include "sdfshadow/voxelize.hpp"

namespace sdfshadow {

/// Named coarse/fine resolutions.
struct SizePreset {
    std::string name;
    Dims coarse;
    Dims fine;
};

/// "S" (64/128), "M" (128/256), "L" (256/512), case-insensitive. Unknown
/// names throw UsageError.
SizePreset size_preset(const std::string& name);
std::vector<SizePreset> size_presets();

/// Default surface-thickening bias for the fine field.
inline constexpr double kDefaultBias = 0.01;

struct PipelineConfig {
    Dims coarse{128, 128, 128};
    Dims fine{256, 256, 256};
    SamplingParams sampling;
    std::optional<double> beta;      // empty: default_beta(coarse grid)
    double bias = kDefaultBias;
    bool recompute_static = false;   // rerun V and JF every frame even when nothing moves

    void validate() const;  // throws ConfigError
};

/// Wall-clock durations of one frame's passes, in nanoseconds.
struct PassTimings {
    std::uint64_t frame = 0;
    std::int64_t voxelize_ns = 0;
    std::int64_t flood_ns = 0;
    std::int64_t sample_ns = 0;
    std::int64_t lighting_ns = 0;
    std::size_t masked_texels = 0;
    std::size_t rays_traced = 0;

    std::int64_t total_ns() const { return voxelize_ns + flood_ns + sample_ns + lighting_ns; }
};

/// Per-frame field construction for one scene: voxelize, flood the coarse
/// field, then ray-sample the fine field.
class Pipeline {
public:
    Pipeline(Scene scene, PipelineConfig config);

    const Scene& scene() const { return scene_; }
    const PipelineConfig& config() const { return config_; }
    GridSpec coarse_grid() const { return {config_.coarse, scene_.bounds}; }
    GridSpec fine_grid() const { return {config_.fine, scene_.bounds}; }
    double beta() const { return beta_; }

    /// Builds fields for `frame`. Frames must be stepped in increasing order.
    PassTimings step(std::uint64_t frame);

    bool has_frame() const { return geometry_ != nullptr; }
    std::uint64_t frame() const { return frame_; }
    const FrameGeometry& geometry() const;
    const VoxelGrid& voxels() const { return voxels_; }
    const DistanceField& coarse() const { return coarse_; }
    const DistanceField& fine_unbiased() const { return builder_.field(); }
    /// Fine field with the configured bias applied.
    DistanceField fine() const;
    const FineFieldBuilder& builder() const { return builder_; }

    /// Deferred lighting of the current frame against `field`; the lighting
    /// time is stored in `timings` when given.
    ShadeOutput render(const DistanceField& field, const ShadeParams& params, PassTimings* timings = nullptr) const;

private:
    Scene scene_;
    PipelineConfig config_;
    double beta_ = 0;
    std::shared_ptr<const FrameGeometry> geometry_;
    VoxelGrid voxels_;
    DistanceField coarse_;
    FineFieldBuilder builder_;
    std::uint64_t frame_ = 0;
};

}  // namespace sdfshadow

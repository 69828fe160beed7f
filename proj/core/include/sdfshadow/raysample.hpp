#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdfshadow/bvh.hpp"
#include "sdfshadow/field.hpp"
#include "sdfshadow/random.hpp"

namespace sdfshadow {

/// Tunables for fine-field ray sampling.
struct SamplingParams {
    int rays_per_texel = 5;         // x, rays per masked texel per frame
    double mask_distance = 0.1;     // d, texels with coarse <= d are ray traced
    double decay_alpha = 0.95;      // alpha, weight of the previous frame
    std::uint64_t seed = 1;
    double t_max = kInfinity;       // ray length cap; the scene diagonal in practice

    void validate() const;  // throws ConfigError
};

/// Result of tracing one texel's rays for one frame (or accumulated across
/// frames). `min_distance` is empty until some ray hits.
struct TexelRays {
    std::optional<double> min_distance;
    std::uint32_t front = 0;
    std::uint32_t back = 0;
};

/// Per-texel running ray state for the fine field.
class AccumulatorField {
public:
    AccumulatorField() = default;
    explicit AccumulatorField(GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return min_distance_.size(); }

    bool has_hit(std::size_t i) const { return flags_[i] & kHit; }
    bool masked(std::size_t i) const { return flags_[i] & kMasked; }
    TexelRays texel(std::size_t i) const;

    /// Folds a frame's rays into the running state. Counts are kept in 16
    /// bits; both halve together when either would overflow, preserving the
    /// majority.
    void merge(std::size_t i, const TexelRays& rays);
    void reset(std::size_t i);
    void set_masked(std::size_t i, bool masked);

private:
    static constexpr std::uint8_t kHit = 1;
    static constexpr std::uint8_t kMasked = 2;

    GridSpec grid_;
    std::vector<float> min_distance_;
    std::vector<std::uint16_t> front_;
    std::vector<std::uint16_t> back_;
    std::vector<std::uint8_t> flags_;
};

/// Fine texels whose trilinear coarse sample at the texel center is <= d.
/// Fine dims must be an integer multiple of the coarse dims on every axis.
std::vector<std::uint8_t> ray_mask(const DistanceField& coarse, const Dims& fine_dims, double d);

/// `count` uniformly distributed directions from `center`; misses are ignored.
TexelRays sample_texel(const BvhIndex& bvh, const Vec3& center, int count, Rng& rng, double t_max = kInfinity);

/// Negative when back-face hits are the strict majority; empty passes through.
std::optional<double> resolve_sign(const TexelRays& rays);

/// Temporal update of one fine texel:
///   c <= d: min(alpha * f_prev + (1 - alpha) * c, r), with an empty r acting as +inf
///   c >  d: c
double accumulate(double f_prev, double c, std::optional<double> r, double alpha, double d);

/// Per-frame counters from update_fine.
struct FineUpdateStats {
    std::size_t masked_texels = 0;
    std::size_t rays_traced = 0;
    std::size_t resets = 0;
};

/// One frame of fine-field construction. `prev` is the previous unbiased fine
/// field (coarse-resampled on the first frame), `state` the running ray state
/// over the fine grid. A texel's ray state resets whenever its coarse sample
/// differs from the previous frame's, so stale hits cannot outlive a change
/// in the scene around it. Deterministic for fixed (seed, frame).
DistanceField update_fine(const DistanceField& prev, const DistanceField& coarse, const BvhIndex& bvh,
                          const SamplingParams& params, std::uint64_t frame, AccumulatorField& state,
                          std::vector<float>& prev_coarse, FineUpdateStats* stats = nullptr);

/// Owns the state carried between frames.
class FineFieldBuilder {
public:
    FineFieldBuilder(GridSpec fine, SamplingParams params);

    const SamplingParams& params() const { return params_; }
    void set_params(const SamplingParams& p);
    const GridSpec& grid() const { return grid_; }

    /// Runs one frame and returns the unbiased fine field.
    const DistanceField& update(const DistanceField& coarse, const BvhIndex& bvh, std::uint64_t frame,
                                FineUpdateStats* stats = nullptr);
    const DistanceField& field() const { return fine_; }
    const AccumulatorField& state() const { return state_; }
    bool initialized() const { return initialized_; }

private:
    GridSpec grid_;
    SamplingParams params_;
    DistanceField fine_;
    AccumulatorField state_;
    std::vector<float> prev_coarse_;
    bool initialized_ = false;
};

}  // namespace sdfshadow

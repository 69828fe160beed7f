#include "sdfshadow/raysample.hpp"

#include <atomic>
#include <limits>

#include "sdfshadow/error.hpp"
#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

void SamplingParams::validate() const {
    if (rays_per_texel < 0) throw ConfigError("rays_per_frame must be >= 0");
    if (!(mask_distance > 0.0) && mask_distance != 0.0) throw ConfigError("mask_distance must be >= 0");
    if (!(decay_alpha >= 0.0 && decay_alpha < 1.0)) throw ConfigError("decay_alpha must lie in [0, 1)");
    if (!(t_max > 0.0)) throw ConfigError("ray t_max must be positive");
}

AccumulatorField::AccumulatorField(GridSpec grid)
    : grid_(grid),
      min_distance_(grid.count(), 0.0f),
      front_(grid.count(), 0),
      back_(grid.count(), 0),
      flags_(grid.count(), 0) {}

TexelRays AccumulatorField::texel(std::size_t i) const {
    TexelRays r;
    if (has_hit(i)) r.min_distance = min_distance_[i];
    r.front = front_[i];
    r.back = back_[i];
    return r;
}

void AccumulatorField::merge(std::size_t i, const TexelRays& rays) {
    if (rays.min_distance) {
        const auto d = static_cast<float>(*rays.min_distance);
        if (!has_hit(i) || d < min_distance_[i]) min_distance_[i] = d;
        flags_[i] |= kHit;
    }
    std::uint32_t f = front_[i] + rays.front, b = back_[i] + rays.back;
    while (f > std::numeric_limits<std::uint16_t>::max() || b > std::numeric_limits<std::uint16_t>::max()) {
        f /= 2;
        b /= 2;
    }
    front_[i] = static_cast<std::uint16_t>(f);
    back_[i] = static_cast<std::uint16_t>(b);
}

void AccumulatorField::reset(std::size_t i) {
    min_distance_[i] = 0.0f;
    front_[i] = 0;
    back_[i] = 0;
    flags_[i] &= static_cast<std::uint8_t>(~kHit);
}

void AccumulatorField::set_masked(std::size_t i, bool masked) {
    flags_[i] = masked ? (flags_[i] | kMasked) : (flags_[i] & static_cast<std::uint8_t>(~kMasked));
}

namespace {

void check_nesting(const GridSpec& coarse, const Dims& fine_dims) {
    for (int a = 0; a < 3; ++a) {
        if (fine_dims[a] < coarse.dims[a] || fine_dims[a] % coarse.dims[a] != 0) {
            throw ConfigError("fine dims must be an integer multiple of coarse dims on every axis");
        }
    }
}

}  // namespace

std::vector<std::uint8_t> ray_mask(const DistanceField& coarse, const Dims& fine_dims, double d) {
    check_nesting(coarse.grid, fine_dims);
    const GridSpec fine{fine_dims, coarse.grid.bounds};
    const DistanceField c = resample(coarse, fine);
    std::vector<std::uint8_t> mask(fine.count(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = c.values[i] <= d ? 1 : 0;
    return mask;
}

TexelRays sample_texel(const BvhIndex& bvh, const Vec3& center, int count, Rng& rng, double t_max) {
    TexelRays out;
    for (int r = 0; r < count; ++r) {
        const double u = rng.uniform(), v = rng.uniform();
        const auto hit = bvh.ray_query(center, uniform_sphere(u, v), t_max);
        if (!hit) continue;
        if (!out.min_distance || hit->t < *out.min_distance) out.min_distance = hit->t;
        (hit->facing == Facing::front ? out.front : out.back) += 1;
    }
    return out;
}

std::optional<double> resolve_sign(const TexelRays& rays) {
    if (!rays.min_distance) return std::nullopt;
    return rays.back > rays.front ? -*rays.min_distance : *rays.min_distance;
}

double accumulate(double f_prev, double c, std::optional<double> r, double alpha, double d) {
    if (c > d) return c;
    const double blended = alpha * f_prev + (1.0 - alpha) * c;
    return r ? std::min(blended, *r) : blended;
}

DistanceField update_fine(const DistanceField& prev, const DistanceField& coarse, const BvhIndex& bvh,
                          const SamplingParams& params, std::uint64_t frame, AccumulatorField& state,
                          std::vector<float>& prev_coarse, FineUpdateStats* stats) {
    params.validate();
    const GridSpec& fine = prev.grid;
    check_nesting(coarse.grid, fine.dims);
    if (!(fine.bounds == coarse.grid.bounds)) throw ConfigError("coarse and fine fields must share bounds");
    if (!state.grid().same_shape(fine)) throw ConfigError("accumulator does not match fine grid");
    const bool have_prev_coarse = prev_coarse.size() == fine.count();
    if (!have_prev_coarse) prev_coarse.assign(fine.count(), 0.0f);

    DistanceField out = resample(coarse, fine);
    out.bias = 0.0f;
    out.frame = frame;

    std::atomic<std::size_t> masked_total{0}, resets_total{0};
    parallel_for(0, fine.count(), 4096, [&](std::size_t lo, std::size_t hi) {
        std::size_t masked = 0, resets = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const float c = out.values[i];
            if (have_prev_coarse && c != prev_coarse[i]) {
                state.reset(i);
                ++resets;
            }
            prev_coarse[i] = c;
            const bool is_masked = c <= params.mask_distance;
            state.set_masked(i, is_masked);
            if (!is_masked) continue;
            ++masked;
            Rng rng(stream_key(params.seed, i, frame));
            state.merge(i, sample_texel(bvh, fine.cell_center(i), params.rays_per_texel, rng, params.t_max));
            const auto r = resolve_sign(state.texel(i));
            out.values[i] = static_cast<float>(
                accumulate(prev.values[i], c, r, params.decay_alpha, params.mask_distance));
        }
        masked_total += masked;
        resets_total += resets;
    });
    if (stats) {
        stats->masked_texels = masked_total;
        stats->rays_traced = masked_total * static_cast<std::size_t>(params.rays_per_texel);
        stats->resets = resets_total;
    }
    return out;
}

FineFieldBuilder::FineFieldBuilder(GridSpec fine, SamplingParams params)
    : grid_(fine), params_(params), state_(fine) {
    grid_.validate(1);
    params_.validate();
}

void FineFieldBuilder::set_params(const SamplingParams& p) {
    p.validate();
    params_ = p;
}

const DistanceField& FineFieldBuilder::update(const DistanceField& coarse, const BvhIndex& bvh, std::uint64_t frame,
                                              FineUpdateStats* stats) {
    if (!initialized_) {
        fine_ = resample(coarse, grid_);
        initialized_ = true;
    }
    fine_ = update_fine(fine_, coarse, bvh, params_, frame, state_, prev_coarse_, stats);
    return fine_;
}

}  // namespace sdfshadow

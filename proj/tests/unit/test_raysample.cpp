#include <doctest.h>

#include "helpers.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/bvh.hpp"
#include "sdfshadow/jfa.hpp"
#include "sdfshadow/parallel.hpp"
#include "sdfshadow/raysample.hpp"
#include "sdfshadow/voxelize.hpp"

using namespace sdfshadow;

namespace {

const Box3 kBounds{Vec3::splat(-2), Vec3::splat(2)};

DistanceField constant_coarse(double value, Dims dims = {4, 4, 4}) { return DistanceField({dims, kBounds}, static_cast<float>(value)); }

}  // namespace

TEST_CASE("ray_mask thresholds") {
    SUBCASE("0.05 <= d is masked") {
        const auto m = ray_mask(constant_coarse(0.05), {8, 8, 8}, 0.1);
        CHECK(std::count(m.begin(), m.end(), 1) == 512);
    }
    SUBCASE("0.5 > d is not masked") {
        const auto m = ray_mask(constant_coarse(0.5), {8, 8, 8}, 0.1);
        CHECK(std::count(m.begin(), m.end(), 1) == 0);
    }
    SUBCASE("infinite d masks everything") {
        const auto m = ray_mask(constant_coarse(1e6), {8, 8, 8}, kInfinity);
        CHECK(std::count(m.begin(), m.end(), 1) == 512);
    }
    SUBCASE("mask follows the interpolated coarse value") {
        DistanceField c = constant_coarse(1.0, {2, 2, 2});
        c.at(0, 0, 0) = 0.0f;
        const auto m = ray_mask(c, {4, 4, 4}, 0.1);
        const GridSpec fine{{4, 4, 4}, kBounds};
        CHECK(m[fine.index(0, 0, 0)] == 1);
        CHECK(m[fine.index(3, 3, 3)] == 0);
    }
    SUBCASE("fine dims must nest") { CHECK_THROWS_AS(ray_mask(constant_coarse(0), {6, 8, 8}, 0.1), ConfigError); }
}

TEST_CASE("sample_texel") {
    SUBCASE("no rays gives an empty result") {
        const BvhIndex bvh(testing::unit_cube());
        Rng rng(1);
        const auto r = sample_texel(bvh, {0, 0, 0}, 0, rng);
        CHECK_FALSE(r.min_distance);
        CHECK(r.front == 0);
        CHECK(r.back == 0);
        CHECK_FALSE(resolve_sign(r));
    }
    SUBCASE("1.0 above a large ground plane") {
        const BvhIndex bvh(shapes::ground_quad(-1000, 1000, -1000, 1000, 0.0));
        Rng rng(2);
        const auto r = sample_texel(bvh, {0, 1, 0}, 1024, rng);
        REQUIRE(r.min_distance);
        CHECK(*r.min_distance >= 1.0);
        CHECK(*r.min_distance <= 1.02);
        CHECK(r.back == 0);
        CHECK(r.front > 400);
    }
    SUBCASE("inside a closed cube every hit is back-facing") {
        const BvhIndex bvh(testing::unit_cube());
        Rng rng(3);
        const auto r = sample_texel(bvh, {0, 0, 0}, 256, rng);
        CHECK(r.back == 256);
        CHECK(r.front == 0);
        CHECK(*resolve_sign(r) < 0);
    }
}

TEST_CASE("resolve_sign") {
    CHECK(*resolve_sign({0.3, 10, 2}) == doctest::Approx(0.3));
    CHECK(*resolve_sign({0.3, 2, 10}) == doctest::Approx(-0.3));
    CHECK(*resolve_sign({0.3, 5, 5}) == doctest::Approx(0.3));
}

TEST_CASE("accumulate examples") {
    CHECK(accumulate(0.5, 0.05, 0.2, 0.95, 0.1) == doctest::Approx(0.2));
    CHECK(accumulate(0.5, 0.4, 0.2, 0.95, 0.1) == doctest::Approx(0.4));
    CHECK(accumulate(-3.0, 0.4, std::nullopt, 0.95, 0.1) == doctest::Approx(0.4));
    CHECK(accumulate(0.02, 0.05, std::nullopt, 0.95, 0.1) == doctest::Approx(0.0215));
    CHECK(accumulate(0.02, 0.1, std::nullopt, 0.95, 0.1) == doctest::Approx(0.95 * 0.02 + 0.05 * 0.1));
}

TEST_CASE("accumulate with alpha = 0 takes min(c, r) at once") {
    CHECK(accumulate(0.01, 0.05, std::nullopt, 0.0, 0.1) == doctest::Approx(0.05));
    CHECK(accumulate(0.01, 0.05, 0.03, 0.0, 0.1) == doctest::Approx(0.03));
}

TEST_CASE("stale value decays geometrically toward c") {
    const double alpha = 0.95, c = 0.05;
    double f = 0.01;
    const double gap = c - f;
    for (int k = 1; k <= 60; ++k) {
        f = accumulate(f, c, std::nullopt, alpha, 0.1);
        CHECK(c - f <= std::pow(alpha, k) * gap + 1e-15);
    }
}

TEST_CASE("SamplingParams validation") {
    SamplingParams p;
    CHECK_NOTHROW(p.validate());
    p.decay_alpha = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.rays_per_texel = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.mask_distance = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.mask_distance = kInfinity;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("AccumulatorField counts halve together on overflow") {
    AccumulatorField acc({{1, 1, 1}, kBounds});
    acc.merge(0, {0.5, 60000, 100});
    acc.merge(0, {0.7, 10000, 20});
    const auto t = acc.texel(0);
    CHECK(t.front == 35000);
    CHECK(t.back == 60);
    CHECK(*t.min_distance == doctest::Approx(0.5));
    acc.reset(0);
    CHECK_FALSE(acc.has_hit(0));
    CHECK(acc.texel(0).front == 0);
}

namespace {

struct SphereSetup {
    TriangleMesh mesh = shapes::uv_sphere({0, 0, 0}, 1.0, 32, 48);
    BvhIndex bvh{mesh};
    GridSpec coarse_grid{{16, 16, 16}, kBounds};
    GridSpec fine_grid{{32, 32, 32}, kBounds};
    DistanceField coarse = seeds_to_sdf(jfa_run(voxelize(mesh, coarse_grid.dims, kBounds)), default_beta(coarse_grid));
};

}  // namespace

TEST_CASE("update_fine refines the masked shell toward the exact distance") {
    SphereSetup s;
    SamplingParams params;
    params.rays_per_texel = 64;
    params.t_max = kBounds.diagonal();
    const auto prev = resample(s.coarse, s.fine_grid);
    AccumulatorField state(s.fine_grid);
    std::vector<float> prev_coarse;
    FineUpdateStats stats;
    const auto out = update_fine(prev, s.coarse, s.bvh, params, 0, state, prev_coarse, &stats);
    CHECK(stats.masked_texels > 0);
    CHECK(stats.rays_traced == stats.masked_texels * 64);
    std::size_t better = 0, masked = 0;
    for (std::size_t i = 0; i < s.fine_grid.count(); ++i) {
        const double truth = s.bvh.nearest_distance(s.fine_grid.cell_center(i));
        if (!state.masked(i)) {
            CHECK(out.values[i] == prev.values[i]);
            continue;
        }
        ++masked;
        // One frame of rays: the fine value is the ray minimum or the blend, whichever is smaller.
        CHECK(out.values[i] <= prev.values[i] + 1e-6);
        better += std::abs(std::abs(out.values[i]) - truth) <= std::abs(std::abs(prev.values[i]) - truth) + 1e-6;
    }
    CHECK(masked == stats.masked_texels);
    CHECK(better >= masked * 9 / 10);
}

TEST_CASE("update_fine with d = 0 leaves the coarse field resampled") {
    SphereSetup s;
    SamplingParams params;
    params.mask_distance = 0.0;
    FineFieldBuilder builder(s.fine_grid, params);
    // Every coarse value is positive here except seed cells, which read -beta.
    DistanceField lifted = s.coarse;
    for (auto& v : lifted.values) v = std::abs(v) + 0.5f;
    FineUpdateStats stats;
    const auto& out = builder.update(lifted, s.bvh, 0, &stats);
    CHECK(stats.masked_texels == 0);
    CHECK(stats.rays_traced == 0);
    CHECK(out.values == resample(lifted, s.fine_grid).values);
}

TEST_CASE("update_fine is deterministic and independent of the worker count") {
    SphereSetup s;
    SamplingParams params;
    params.t_max = kBounds.diagonal();
    const auto run = [&](unsigned threads) {
        set_thread_count(threads);
        FineFieldBuilder builder(s.fine_grid, params);
        for (std::uint64_t f = 0; f < 3; ++f) builder.update(s.coarse, s.bvh, f);
        set_thread_count(0);
        return builder.field();
    };
    CHECK(run(1) == run(3));
}

TEST_CASE("update_fine resets ray state when the coarse sample changes") {
    SphereSetup s;
    SamplingParams params;
    params.t_max = kBounds.diagonal();
    FineFieldBuilder builder(s.fine_grid, params);
    builder.update(s.coarse, s.bvh, 0);
    FineUpdateStats stats;
    builder.update(s.coarse, s.bvh, 1, &stats);
    CHECK(stats.resets == 0);
    DistanceField moved = s.coarse;
    moved.values[s.coarse_grid.index(8, 8, 8)] += 0.01f;
    builder.update(moved, s.bvh, 2, &stats);
    CHECK(stats.resets > 0);
}

TEST_CASE("update_fine errors") {
    SphereSetup s;
    SamplingParams params;
    AccumulatorField state(s.fine_grid);
    std::vector<float> prev_coarse;
    const auto prev = resample(s.coarse, s.fine_grid);
    AccumulatorField wrong({{8, 8, 8}, kBounds});
    CHECK_THROWS_AS(update_fine(prev, s.coarse, s.bvh, params, 0, wrong, prev_coarse), ConfigError);
    DistanceField shifted = s.coarse;
    shifted.grid.bounds.hi.x += 1;
    CHECK_THROWS_AS(update_fine(prev, shifted, s.bvh, params, 0, state, prev_coarse), ConfigError);
}

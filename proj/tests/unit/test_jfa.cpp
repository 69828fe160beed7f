#include <doctest.h>

#include "helpers.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/jfa.hpp"
#include "sdfshadow/parallel.hpp"
#include "sdfshadow/voxelize.hpp"

using namespace sdfshadow;

namespace {

const GridSpec kGrid32{{32, 32, 32}, {Vec3::splat(0), Vec3::splat(32)}};

VoxelGrid seeded(const GridSpec& g, std::initializer_list<std::array<int, 3>> cells) {
    VoxelGrid v(g);
    for (const auto& c : cells) v.set(g.index(c[0], c[1], c[2]));
    return v;
}

VoxelGrid random_seeds(const GridSpec& g, int count, std::uint64_t seed) {
    VoxelGrid v(g);
    Rng rng(seed);
    while (static_cast<int>(v.occupied_count()) < count) v.set(static_cast<std::size_t>(rng() % g.count()));
    return v;
}

double exact_nearest_sq(const VoxelGrid& v, std::size_t idx) {
    const GridSpec& g = v.grid();
    const Vec3 p = g.cell_center(idx);
    double best = kInfinity;
    for (std::size_t s = 0; s < g.count(); ++s) {
        if (!v.occupied(s)) continue;
        const Vec3 d = g.cell_center(s) - p;
        best = std::min(best, dot(d, d));
    }
    return best;
}

}  // namespace

TEST_CASE("jfa_init") {
    SUBCASE("all-empty grid fails") { CHECK_THROWS_AS(jfa_init(VoxelGrid(kGrid32)), NoSeedError); }
    SUBCASE("single occupied cell seeds only itself") {
        const auto seeds = jfa_init(seeded(kGrid32, {{2, 3, 4}}));
        CHECK(seeds.seed_count() == 1);
        CHECK(seeds.seed(kGrid32.index(2, 3, 4)) == SeedGrid::pack(2, 3, 4));
        CHECK(seeds.seed(kGrid32.index(0, 0, 0)) == SeedGrid::kEmpty);
        CHECK_FALSE(seeds.complete());
    }
    SUBCASE("cube shell seeds every occupied cell") {
        const GridSpec g{{16, 16, 16}, {Vec3::splat(-2), Vec3::splat(2)}};
        const auto vox = voxelize(testing::unit_cube(), g.dims, g.bounds);
        CHECK(jfa_init(vox).seed_count() == vox.occupied_count());
    }
}

TEST_CASE("seed packing") {
    const auto s = SeedGrid::pack(1023, 5, 700);
    CHECK(SeedGrid::unpack(s) == std::array<int, 3>{1023, 5, 700});
    CHECK(SeedGrid::pack(1, 0, 0) > SeedGrid::pack(0, 1023, 1023));
}

TEST_CASE("jfa_step: single seed within reach") {
    const auto seeds = jfa_step(jfa_init(seeded(kGrid32, {{16, 16, 16}})), 16);
    const auto target = SeedGrid::pack(16, 16, 16);
    std::size_t reached = 0;
    for (int k = 0; k < 32; k += 16) {
        for (int j = 0; j < 32; j += 16) {
            for (int i = 0; i < 32; i += 16) {
                CHECK(seeds.seed(kGrid32.index(i, j, k)) == target);
                ++reached;
            }
        }
    }
    CHECK(reached == 8);
    CHECK(seeds.seed(kGrid32.index(1, 16, 16)) == SeedGrid::kEmpty);
}

TEST_CASE("jfa_step: equidistant seeds break ties toward the smaller coordinate") {
    const auto seeds = jfa_step(jfa_init(seeded(kGrid32, {{10, 4, 4}, {14, 4, 4}})), 2);
    CHECK(seeds.seed(kGrid32.index(12, 4, 4)) == SeedGrid::pack(10, 4, 4));
    const auto flipped = jfa_step(jfa_init(seeded(kGrid32, {{4, 4, 14}, {4, 4, 10}})), 2);
    CHECK(flipped.seed(kGrid32.index(4, 4, 12)) == SeedGrid::pack(4, 4, 10));
}

TEST_CASE("jfa_step rejects non-positive offsets") {
    CHECK_THROWS_AS(jfa_step(jfa_init(seeded(kGrid32, {{1, 1, 1}})), 0), InvariantError);
}

TEST_CASE("jfa_schedule") {
    CHECK(jfa_schedule({128, 128, 128}) == std::vector<int>{64, 32, 16, 8, 4, 2, 1});
    CHECK(jfa_schedule({400, 200, 400}) == std::vector<int>{256, 128, 64, 32, 16, 8, 4, 2, 1});
    CHECK(jfa_schedule({33, 2, 2}) == std::vector<int>{32, 16, 8, 4, 2, 1});
    CHECK(jfa_schedule({2, 2, 2}) == std::vector<int>{1});
}

TEST_CASE("jfa_run: a single seed reaches every cell exactly") {
    const GridSpec g{{20, 9, 31}, {Vec3::splat(0), Vec3{2, 1, 3}}};
    const auto seeds = jfa_run(seeded(g, {{17, 2, 5}}));
    CHECK(seeds.complete());
    for (std::size_t i = 0; i < g.count(); ++i) CHECK(seeds.seed(i) == SeedGrid::pack(17, 2, 5));
}

TEST_CASE("jfa_run: random 32^3 seed sets against exhaustive search") {
    for (std::uint64_t set = 0; set < 3; ++set) {
        const auto vox = random_seeds(kGrid32, 50, 1000 + set);
        const auto seeds = jfa_run(vox);
        std::size_t exact = 0;
        for (std::size_t i = 0; i < kGrid32.count(); ++i) {
            const double truth = exact_nearest_sq(vox, i);
            const double got = seeds.distance_sq(i);
            CHECK(got >= truth);
            exact += got == truth;
        }
        CHECK(static_cast<double>(exact) / kGrid32.count() >= 0.99);
    }
}

TEST_CASE("jfa_run observer sees every step") {
    std::vector<int> offsets;
    jfa_run(seeded(kGrid32, {{3, 3, 3}}), [&](int offset, const SeedGrid&) { offsets.push_back(offset); });
    CHECK(offsets == jfa_schedule(kGrid32.dims));
}

TEST_CASE("jfa_run is independent of the worker count") {
    const auto vox = random_seeds(kGrid32, 80, 5);
    set_thread_count(1);
    const auto a = jfa_run(vox);
    set_thread_count(3);
    const auto b = jfa_run(vox);
    set_thread_count(0);
    CHECK(a == b);
}

TEST_CASE("seeds_to_sdf") {
    const GridSpec g{{16, 16, 16}, {Vec3::splat(0), Vec3::splat(4)}};
    const double h = g.cell_size().x;
    SUBCASE("seed cell reads -beta and axial cells read their distance") {
        const auto field = seeds_to_sdf(jfa_run(seeded(g, {{5, 5, 5}})), 0.1);
        CHECK(field.at(5, 5, 5) == doctest::Approx(-0.1));
        CHECK(field.beta == doctest::Approx(0.1));
        const auto plain = seeds_to_sdf(jfa_run(seeded(g, {{5, 5, 5}})), 0.0);
        CHECK(plain.at(8, 5, 5) == doctest::Approx(3 * h));
        CHECK(plain.at(5, 5, 2) == doctest::Approx(3 * h));
    }
    SUBCASE("half-diagonal beta thickens the surface") {
        const double beta = 0.5 * g.cell_diagonal();
        const auto field = seeds_to_sdf(jfa_run(seeded(g, {{5, 5, 5}})), beta);
        for (const auto& c : {std::array{4, 5, 5}, std::array{6, 5, 5}, std::array{5, 4, 5}, std::array{5, 5, 6}}) {
            CHECK(field.at(c[0], c[1], c[2]) < h);
            CHECK(field.at(c[0], c[1], c[2]) == doctest::Approx(h - beta));
        }
    }
    SUBCASE("negative beta is rejected") { CHECK_THROWS_AS(seeds_to_sdf(jfa_run(seeded(g, {{1, 1, 1}})), -1), ConfigError); }
}

TEST_CASE("default_beta is a fixed fraction of the cell diagonal") {
    const GridSpec g{{64, 64, 64}, {Vec3::splat(-2), Vec3::splat(2)}};
    CHECK(default_beta(g) == doctest::Approx(kDefaultBetaFraction * g.cell_diagonal()));
}

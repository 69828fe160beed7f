#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/bvh.hpp"
#include "sdfshadow/distance.hpp"
#include "sdfshadow/jfa.hpp"
#include "sdfshadow/raysample.hpp"
#include "sdfshadow/voxelize.hpp"

using namespace sdfshadow;

namespace {

DistanceField ramp_field(const GridSpec& g, std::uint64_t seed) {
    DistanceField f(g, 0.0f);
    Rng rng(seed);
    for (auto& v : f.values) v = static_cast<float>(rng.uniform() * 2 - 1);
    return f;
}

std::string saved_bytes(const DistanceField& f) {
    std::ostringstream out;
    save_field(out, f);
    return out.str();
}

}  // namespace

TEST_CASE("sample_trilinear examples") {
    const GridSpec g{{4, 4, 4}, {Vec3::splat(0), Vec3::splat(4)}};
    DistanceField f = ramp_field(g, 1);
    SUBCASE("cell centers reproduce the stored value") {
        for (std::size_t i = 0; i < g.count(); ++i) {
            CHECK(std::abs(sample_trilinear(f, g.cell_center(i)).value - f.values[i]) <= 1e-12);
        }
    }
    SUBCASE("midpoint of two adjacent centers") {
        f.at(1, 2, 2) = 0.2f;
        f.at(2, 2, 2) = 0.4f;
        CHECK(sample_trilinear(f, {2.0, 2.5, 2.5}).value == doctest::Approx(0.3));
    }
    SUBCASE("constant field everywhere, border flag outside") {
        const DistanceField c(g, 0.75f);
        Rng rng(2);
        for (int i = 0; i < 200; ++i) {
            const Vec3 p{rng.uniform() * 6 - 1, rng.uniform() * 6 - 1, rng.uniform() * 6 - 1};
            const auto s = sample_trilinear(c, p);
            CHECK(s.value == doctest::Approx(0.75));
            CHECK(s.in_bounds == g.bounds.contains(p));
        }
    }
}

TEST_CASE("sample_trilinear reproduces affine fields exactly inside the center lattice") {
    const GridSpec g{{7, 5, 6}, {Vec3{-1, 0, 2}, Vec3{3, 1, 5}}};
    DistanceField f(g, 0.0f);
    const auto affine = [](const Vec3& p) { return 0.25 * p.x - 0.5 * p.y + 0.125 * p.z + 0.5; };
    for (std::size_t i = 0; i < g.count(); ++i) f.values[i] = static_cast<float>(affine(g.cell_center(i)));
    Rng rng(3);
    const Vec3 lo = g.cell_center(0, 0, 0), hi = g.cell_center(6, 4, 5);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p = lo + mul(hi - lo, Vec3{rng.uniform(), rng.uniform(), rng.uniform()});
        CHECK(sample_trilinear(f, p).value == doctest::Approx(affine(p)).epsilon(1e-5));
    }
}

TEST_CASE("resample equals trilinear sampling at target centers bit for bit") {
    const GridSpec src{{8, 6, 5}, {Vec3{-2, -1, 0}, Vec3{2, 2, 3}}};
    const DistanceField f = ramp_field(src, 4);
    for (const Dims& d : {Dims{16, 12, 10}, Dims{24, 6, 15}, Dims{8, 6, 5}, Dims{13, 7, 9}}) {
        const GridSpec dst{d, src.bounds};
        const auto r = resample(f, dst);
        for (std::size_t i = 0; i < dst.count(); ++i) {
            CHECK(r.values[i] == static_cast<float>(sample_trilinear(f, dst.cell_center(i)).value));
        }
    }
    const GridSpec flat{{1, 4, 4}, src.bounds};
    const auto single = resample(ramp_field(flat, 5), GridSpec{{3, 8, 8}, src.bounds});
    CHECK(single.values.size() == 3 * 8 * 8);
}

TEST_CASE("apply_bias") {
    const GridSpec g{{2, 2, 2}, {Vec3::splat(0), Vec3::splat(1)}};
    DistanceField f(g, 0.25f);
    SUBCASE("0.01 lowers every value") {
        const auto b = apply_bias(f, 0.01);
        for (float v : b.values) CHECK(v == doctest::Approx(0.24));
        CHECK(b.bias == doctest::Approx(0.01));
    }
    SUBCASE("zero is the identity") { CHECK(apply_bias(f, 0.0) == f); }
    SUBCASE("bias accumulates") {
        const auto b = apply_bias(apply_bias(f, 0.01), 0.01);
        CHECK(b.bias == doctest::Approx(0.02));
        for (float v : b.values) CHECK(v == doctest::Approx(0.23));
    }
    SUBCASE("negative bias rejected") { CHECK_THROWS_AS(apply_bias(f, -0.1), ConfigError); }
    SUBCASE("bias commutes with resampling up to rounding") {
        const DistanceField r = ramp_field({{4, 4, 4}, g.bounds}, 6);
        const GridSpec fine{{8, 8, 8}, g.bounds};
        const auto a = resample(apply_bias(r, 0.05), fine);
        const auto b = apply_bias(resample(r, fine), 0.05);
        for (std::size_t i = 0; i < fine.count(); ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-6));
    }
}

TEST_CASE("slice orientation and errors") {
    const GridSpec g{{3, 4, 5}, {Vec3::splat(0), Vec3{3, 4, 5}}};
    DistanceField f(g, 0.0f);
    for (int k = 0; k < 5; ++k)
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 3; ++i) f.at(i, j, k) = static_cast<float>(100 * i + 10 * j + k);
    const auto x = slice(f, 0, 2);
    CHECK(x.width == 4);
    CHECK(x.height == 5);
    CHECK(x.at(3, 4) == 234.0f);
    const auto y = slice(f, 1, 1);
    CHECK(y.width == 3);
    CHECK(y.at(2, 3) == 213.0f);
    const auto z = slice(f, 2, 4);
    CHECK(z.height == 4);
    CHECK(z.at(1, 2) == 124.0f);
    CHECK_THROWS_AS(slice(f, 3, 0), UsageError);
    CHECK_THROWS_AS(slice(f, 1, 4), UsageError);
}

TEST_CASE("slice through a single seed shows concentric rings") {
    const GridSpec g{{33, 33, 33}, {Vec3::splat(-1), Vec3::splat(1)}};
    VoxelGrid v(g);
    v.set(g.index(16, 16, 16));
    const auto img = slice(seeds_to_sdf(jfa_run(v), 0.0), 1, 16);
    const double h = g.cell_size().x;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            CHECK(img.at(x, y) == doctest::Approx(h * std::hypot(x - 16, y - 16)).epsilon(1e-5));
        }
    }
    const auto rgb = signed_colors(img, 1.0);
    CHECK(rgb.size() == static_cast<std::size_t>(3 * img.width * img.height));
}

TEST_CASE("slice away from geometry is smooth and monotone") {
    const GridSpec g{{32, 32, 32}, {Vec3::splat(-2), Vec3::splat(2)}};
    const auto f = testing::sphere_field(g, {0, -1.5, 0}, 0.3);
    const auto img = slice(f, 1, 28);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 17; x < img.width; ++x) CHECK(img.at(x, y) > img.at(x - 1, y));
    }
}

TEST_CASE("signed colors separate negative and positive values") {
    ScalarImage img{2, 1, {-0.5f, 0.5f}};
    const auto rgb = signed_colors(img, 1.0);
    CHECK(rgb[0] > rgb[2]);
    CHECK(rgb[5] >= rgb[3]);
}

TEST_CASE("fine slice has lower residual than the coarse slice in the masked region") {
    const Box3 bounds{Vec3::splat(-2), Vec3::splat(2)};
    const auto sphere = shapes::uv_sphere({0, 0, 0}, 1.0, 32, 48);
    const BvhIndex bvh(sphere);
    const GridSpec coarse_grid{{16, 16, 16}, bounds};
    const GridSpec fine_grid{{32, 32, 32}, bounds};
    const auto vox = voxelize(sphere, coarse_grid.dims, bounds);
    const auto coarse = seeds_to_sdf(jfa_run(vox), default_beta(coarse_grid));
    SamplingParams params;
    params.mask_distance = 0.3;
    FineFieldBuilder builder(fine_grid, params);
    for (std::uint64_t frame = 0; frame < 20; ++frame) builder.update(coarse, bvh, frame);
    const auto coarse_on_fine = resample(coarse, fine_grid);
    const int plane = 16;
    const auto fine_img = slice(builder.field(), 1, plane);
    const auto coarse_img = slice(coarse_on_fine, 1, plane);
    double fine_err = 0, coarse_err = 0;
    std::size_t n = 0;
    for (int y = 0; y < fine_img.height; ++y) {
        for (int x = 0; x < fine_img.width; ++x) {
            if (coarse_img.at(x, y) > params.mask_distance) continue;
            const double truth = std::abs(length(fine_grid.cell_center(x, plane, y)) - 1.0);
            fine_err += std::abs(std::abs(fine_img.at(x, y)) - truth);
            coarse_err += std::abs(std::abs(coarse_img.at(x, y)) - truth);
            ++n;
        }
    }
    REQUIRE(n > 50);
    CHECK(fine_err < coarse_err);
}

TEST_CASE("field file round trip and layout") {
    const GridSpec g{{5, 3, 2}, {Vec3{-1, -2, -3}, Vec3{1, 2, 3}}};
    DistanceField f = ramp_field(g, 7);
    f.beta = 0.125f;
    f.bias = 0.01f;
    f.frame = 42;
    const std::string bytes = saved_bytes(f);
    CHECK(bytes.size() == 4 + 4 + 12 + 24 + 4 + 4 + 8 + 4 * g.count());
    CHECK(bytes.substr(0, 4) == "RSDF");
    std::istringstream in(bytes);
    CHECK(load_field(in) == f);
}

TEST_CASE("field file errors") {
    const GridSpec g{{2, 2, 2}, {Vec3::splat(0), Vec3::splat(1)}};
    const std::string bytes = saved_bytes(DistanceField(g, 1.0f));
    SUBCASE("bad magic") {
        std::string bad = bytes;
        bad[0] = 'X';
        std::istringstream in(bad);
        CHECK_THROWS_AS(load_field(in), FormatError);
    }
    SUBCASE("newer version") {
        std::string bad = bytes;
        bad[4] = static_cast<char>(kFieldFormatVersion + 1);
        std::istringstream in(bad);
        try {
            load_field(in);
            FAIL("expected UnsupportedVersionError");
        } catch (const UnsupportedVersionError& e) {
            CHECK(e.found() == kFieldFormatVersion + 1);
        }
    }
    SUBCASE("truncated data") {
        std::istringstream in(bytes.substr(0, bytes.size() - 2));
        CHECK_THROWS_AS(load_field(in), FormatError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_field("/nonexistent/dir/field.rsdf"), IoError); }
}

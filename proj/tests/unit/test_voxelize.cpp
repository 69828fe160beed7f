#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/voxelize.hpp"

using namespace sdfshadow;

namespace {

// Brute-force reference: every cell against every triangle.
VoxelGrid reference_voxelize(const TriangleMesh& mesh, const GridSpec& g) {
    VoxelGrid out(g);
    for (int k = 0; k < g.dims[2]; ++k) {
        for (int j = 0; j < g.dims[1]; ++j) {
            for (int i = 0; i < g.dims[0]; ++i) {
                for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
                    const auto c = mesh.corners(t);
                    if (triangle_box_overlap(g.cell_box(i, j, k), c[0], c[1], c[2])) {
                        out.set(g.index(i, j, k));
                        break;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("triangle_box_overlap basics") {
    const Box3 box{Vec3::splat(0), Vec3::splat(1)};
    CHECK(triangle_box_overlap(box, {0.5, 0.5, 0.5}, {5, 0.5, 0.5}, {0.5, 5, 0.5}));
    CHECK(triangle_box_overlap(box, {-1, -1, 0.5}, {3, -1, 0.5}, {-1, 3, 0.5}));
    CHECK_FALSE(triangle_box_overlap(box, {2, 2, 2}, {3, 2, 2}, {2, 3, 2}));
    // Plane x + y + z = 3.2 passes beyond the (1,1,1) corner.
    CHECK_FALSE(triangle_box_overlap(box, {3.2, 0, 0}, {0, 3.2, 0}, {0, 0, 3.2}));
    CHECK(triangle_box_overlap(box, {2.8, 0, 0}, {0, 2.8, 0}, {0, 0, 2.8}));
    // Touching a face counts.
    CHECK(triangle_box_overlap(box, {1, 0, 0}, {1, 1, 0}, {1, 0, 1}));
}

TEST_CASE("voxelize: cells away from the mesh stay empty") {
    const GridSpec g{{16, 16, 16}, {Vec3::splat(-4), Vec3::splat(4)}};
    const auto mesh = shapes::box({Vec3::splat(1.25), Vec3::splat(3.25)});
    const auto vox = voxelize(mesh, g.dims, g.bounds);
    for (int k = 0; k < 10; ++k) {
        for (int j = 0; j < 16; ++j) {
            for (int i = 0; i < 16; ++i) CHECK_FALSE(vox.occupied(i, j, k));
        }
    }
    CHECK(vox.occupied_count() > 0);
}

TEST_CASE("voxelize: square inside cells (0..3, 0, 0..3) sets exactly those 16 cells") {
    const GridSpec g{{8, 8, 8}, {Vec3::splat(0), Vec3::splat(2)}};
    // Unit square at mid-height of row 0, edges just inside the cell faces.
    const double e = 1e-6;
    const auto square = shapes::ground_quad(e, 1 - e, e, 1 - e, 0.125);
    const auto vox = voxelize(square, g.dims, g.bounds);
    CHECK(vox.occupied_count() == 16);
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) CHECK(vox.occupied(i, 0, k));
    }
}

TEST_CASE("voxelize: an edge lying on a cell face marks the neighbour too") {
    const GridSpec g{{8, 8, 8}, {Vec3::splat(0), Vec3::splat(2)}};
    const auto square = shapes::ground_quad(0, 1, 0, 1, 0.125);
    const auto vox = voxelize(square, g.dims, g.bounds);
    CHECK(vox.occupied_count() == 25);
    CHECK(vox.occupied(4, 0, 4));
}

TEST_CASE("voxelize: cube shell in a 16^3 grid") {
    const GridSpec g{{16, 16, 16}, {Vec3::splat(-2), Vec3::splat(2)}};
    const auto cube = shapes::box({Vec3::splat(-1.1), Vec3::splat(1.1)});
    const auto vox = voxelize(cube, g.dims, g.bounds);
    const auto ref = reference_voxelize(cube, g);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < g.count(); ++i) diff += vox.occupied(i) != ref.occupied(i);
    CHECK(diff == 0);
    // Faces at +-1.1 fall in cells 3 and 12; everything strictly between is hollow.
    for (int k = 4; k < 12; ++k) {
        for (int j = 4; j < 12; ++j) {
            for (int i = 4; i < 12; ++i) CHECK_FALSE(vox.occupied(i, j, k));
        }
    }
    // Closed shell: every face cell of the 10x10x10 block between 3 and 12 is set.
    std::size_t shell = 0;
    for (int k = 3; k <= 12; ++k) {
        for (int j = 3; j <= 12; ++j) {
            for (int i = 3; i <= 12; ++i) {
                const bool boundary = i == 3 || i == 12 || j == 3 || j == 12 || k == 3 || k == 12;
                if (boundary) {
                    CHECK(vox.occupied(i, j, k));
                    ++shell;
                }
            }
        }
    }
    CHECK(vox.occupied_count() == shell);
}

TEST_CASE("voxelize matches the brute-force oracle on a random soup") {
    const GridSpec g{{12, 10, 14}, {Vec3::splat(-3), Vec3::splat(3)}};
    const auto soup = testing::random_soup(60, 4);
    const auto vox = voxelize(soup, g.dims, g.bounds);
    const auto ref = reference_voxelize(soup, g);
    for (std::size_t i = 0; i < g.count(); ++i) CHECK(vox.occupied(i) == ref.occupied(i));
}

TEST_CASE("voxelize: errors") {
    const auto cube = testing::unit_cube();
    SUBCASE("mesh outside the bounds lists the triangles") {
        try {
            voxelize(cube, {8, 8, 8}, {Vec3::splat(-0.5), Vec3::splat(2)});
            FAIL("expected OutOfBoundsError");
        } catch (const OutOfBoundsError& e) {
            CHECK(e.triangles().size() == 12);
        }
    }
    SUBCASE("fewer than two cells per axis") {
        CHECK_THROWS_AS(voxelize(cube, {8, 1, 8}, {Vec3::splat(-2), Vec3::splat(2)}), ConfigError);
    }
}

TEST_CASE("occupancy dump round trip") {
    const GridSpec g{{9, 5, 7}, {Vec3{-1, -2, -3}, Vec3{1, 2, 3}}};
    const auto vox = voxelize(testing::unit_cube(), g.dims, g.bounds);
    std::stringstream buf;
    write_occupancy(buf, vox);
    const std::string bytes = buf.str();
    CHECK(bytes.size() == 36 + (g.count() + 7) / 8);
    const auto back = read_occupancy(buf);
    CHECK(back.grid().dims == g.dims);
    for (std::size_t i = 0; i < g.count(); ++i) CHECK(back.occupied(i) == vox.occupied(i));

    std::stringstream truncated(bytes.substr(0, bytes.size() - 1));
    CHECK_THROWS_AS(read_occupancy(truncated), FormatError);
}

#pragma once

#include <cmath>
#include <vector>

#include "sdfshadow/field.hpp"
#include "sdfshadow/mesh.hpp"
#include "sdfshadow/random.hpp"
#include "sdfshadow/shapes.hpp"

namespace testing {

using namespace sdfshadow;

inline TriangleMesh unit_cube() { return shapes::box({Vec3::splat(-1), Vec3::splat(1)}); }

inline TriangleMesh random_soup(std::size_t triangles, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> v;
    std::vector<TriangleIndices> t;
    for (std::size_t i = 0; i < triangles; ++i) {
        const Vec3 c{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
        for (int k = 0; k < 3; ++k) {
            v.push_back(c + Vec3{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5} * 0.6);
        }
        const auto b = static_cast<std::uint32_t>(3 * i);
        t.push_back({b, b + 1, b + 2});
    }
    return TriangleMesh::build(std::move(v), std::move(t));
}

/// Cell-centered field of |p - center| - radius.
inline DistanceField sphere_field(const GridSpec& g, const Vec3& center, double radius) {
    DistanceField f(g, 0.0f);
    for (std::size_t i = 0; i < g.count(); ++i) {
        f.values[i] = static_cast<float>(length(g.cell_center(i) - center) - radius);
    }
    return f;
}

inline Vec3 random_unit(Rng& rng) { return uniform_sphere(rng.uniform(), rng.uniform()); }

}  // namespace testing

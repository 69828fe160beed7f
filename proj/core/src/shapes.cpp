#include "sdfshadow/shapes.hpp"

#include <cmath>

namespace sdfshadow::shapes {

TriangleMesh uv_sphere(const Vec3& center, double radius, int stacks, int slices) {
    std::vector<Vec3> v;
    std::vector<TriangleIndices> t;
    v.push_back(center + Vec3{0, radius, 0});
    for (int i = 1; i < stacks; ++i) {
        const double theta = kPi * i / stacks;
        for (int j = 0; j < slices; ++j) {
            const double phi = 2.0 * kPi * j / slices;
            v.push_back(center + radius * Vec3{std::sin(theta) * std::cos(phi), std::cos(theta),
                                               -std::sin(theta) * std::sin(phi)});
        }
    }
    v.push_back(center - Vec3{0, radius, 0});
    const auto ring = [&](int i, int j) { return static_cast<std::uint32_t>(1 + (i - 1) * slices + (j % slices)); };
    const auto south = static_cast<std::uint32_t>(v.size() - 1);
    for (int j = 0; j < slices; ++j) t.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i + 1 < stacks; ++i) {
        for (int j = 0; j < slices; ++j) {
            t.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            t.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (int j = 0; j < slices; ++j) t.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
    return TriangleMesh::build(std::move(v), std::move(t));
}

TriangleMesh box(const Box3& b) {
    std::vector<Vec3> v;
    for (int i = 0; i < 8; ++i) {
        v.push_back({(i & 1) ? b.hi.x : b.lo.x, (i & 2) ? b.hi.y : b.lo.y, (i & 4) ? b.hi.z : b.lo.z});
    }
    // Each face wound counter-clockwise seen from outside.
    std::vector<TriangleIndices> t = {
        {0, 4, 6}, {0, 6, 2},  // -x
        {1, 3, 7}, {1, 7, 5},  // +x
        {0, 1, 5}, {0, 5, 4},  // -y
        {2, 6, 7}, {2, 7, 3},  // +y
        {0, 2, 3}, {0, 3, 1},  // -z
        {4, 5, 7}, {4, 7, 6},  // +z
    };
    return TriangleMesh::build(std::move(v), std::move(t));
}

TriangleMesh ground_quad(double x0, double x1, double z0, double z1, double height) {
    std::vector<Vec3> v = {{x0, height, z0}, {x1, height, z0}, {x1, height, z1}, {x0, height, z1}};
    std::vector<TriangleIndices> t = {{0, 2, 1}, {0, 3, 2}};
    return TriangleMesh::build(std::move(v), std::move(t));
}

TriangleMesh lathe(std::span<const std::pair<double, double>> profile, int slices) {
    std::vector<Vec3> v;
    std::vector<TriangleIndices> t;
    for (const auto& [r, h] : profile) {
        for (int j = 0; j < slices; ++j) {
            const double phi = 2.0 * kPi * j / slices;
            v.push_back({r * std::cos(phi), h, -r * std::sin(phi)});
        }
    }
    const auto idx = [&](std::size_t i, int j) { return static_cast<std::uint32_t>(i * slices + (j % slices)); };
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        for (int j = 0; j < slices; ++j) {
            t.push_back({idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)});
            t.push_back({idx(i, j), idx(i + 1, j + 1), idx(i + 1, j)});
        }
    }
    return TriangleMesh::build(std::move(v), std::move(t));
}

TriangleMesh torus(double major_radius, double minor_radius, int major_segments, int minor_segments) {
    std::vector<Vec3> v;
    std::vector<TriangleIndices> t;
    for (int i = 0; i < major_segments; ++i) {
        const double u = 2.0 * kPi * i / major_segments;
        for (int j = 0; j < minor_segments; ++j) {
            const double w = 2.0 * kPi * j / minor_segments;
            const double r = major_radius + minor_radius * std::cos(w);
            v.push_back({r * std::cos(u), minor_radius * std::sin(w), -r * std::sin(u)});
        }
    }
    const auto idx = [&](int i, int j) {
        return static_cast<std::uint32_t>((i % major_segments) * minor_segments + (j % minor_segments));
    };
    for (int i = 0; i < major_segments; ++i) {
        for (int j = 0; j < minor_segments; ++j) {
            t.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            t.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    }
    return TriangleMesh::build(std::move(v), std::move(t));
}

}  // namespace sdfshadow::shapes

#pragma once

#include "sdfshadow/mesh.hpp"

namespace sdfshadow::shapes {

/// Latitude/longitude sphere, outward normals. Triangle count is
/// 2 * slices * (stacks - 1).
TriangleMesh uv_sphere(const Vec3& center, double radius, int stacks, int slices);

/// Closed axis-aligned box, 12 triangles, outward normals.
TriangleMesh box(const Box3& b);

/// Single quad in the plane y = height spanning [x0,x1] x [z0,z1], normal +y.
TriangleMesh ground_quad(double x0, double x1, double z0, double z1, double height = 0.0);

/// Open surface of revolution about +y from a (radius, height) profile.
TriangleMesh lathe(std::span<const std::pair<double, double>> profile, int slices);

/// Torus around the y axis.
TriangleMesh torus(double major_radius, double minor_radius, int major_segments, int minor_segments);

}  // namespace sdfshadow::shapes

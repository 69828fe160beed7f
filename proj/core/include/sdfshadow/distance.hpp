#pragma once

#include "sdfshadow/math.hpp"
#include "sdfshadow/mesh.hpp"

namespace sdfshadow {

/// Closest point on triangle (a, b, c) to p, resolving face, edge and vertex regions.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Exact unsigned point-to-mesh distance, brute force over every triangle.
double exact_distance(const TriangleMesh& mesh, const Vec3& point);

/// Squared distance from p to box (0 inside).
inline double box_distance_sq(const Box3& box, const Vec3& p) {
    double d2 = 0;
    for (int a = 0; a < 3; ++a) {
        const double v = p[a] < box.lo[a] ? box.lo[a] - p[a] : (p[a] > box.hi[a] ? p[a] - box.hi[a] : 0.0);
        d2 += v * v;
    }
    return d2;
}

}  // namespace sdfshadow

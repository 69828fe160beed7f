#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdfshadow/math.hpp"
#include "sdfshadow/mesh.hpp"

namespace sdfshadow {

enum class Facing : std::uint8_t { front, back };

/// Closest intersection along a ray. Facing is front when the ray direction
/// opposes the triangle normal.
struct RayHit {
    double t = 0;
    std::uint32_t triangle = 0;
    Facing facing = Facing::front;
};

/// Binary bounding-volume hierarchy over a triangle mesh, built with a binned
/// surface-area heuristic (median split when no split helps). Owns a copy of
/// the triangle data it needs, so it stays valid independently of the mesh.
class BvhIndex {
public:
    struct Node {
        Box3 box;
        std::uint32_t first = 0;  // leaf: first permutation slot; inner: left child (right is first + 1)
        std::uint32_t count = 0;  // 0 for inner nodes
        bool leaf() const { return count != 0; }
    };

    static constexpr std::uint32_t kLeafSize = 4;
    static constexpr int kBins = 16;

    explicit BvhIndex(const TriangleMesh& mesh);

    std::span<const Node> nodes() const { return nodes_; }
    /// Slot -> triangle id; each id appears exactly once.
    std::span<const std::uint32_t> permutation() const { return permutation_; }
    std::size_t triangle_count() const { return permutation_.size(); }
    const Box3& bounds() const { return nodes_.front().box; }

    std::optional<RayHit> ray_query(const Vec3& origin, const Vec3& direction, double t_max) const;
    /// True if anything is hit in (0, t_max]; cheaper than ray_query.
    bool occluded(const Vec3& origin, const Vec3& direction, double t_max) const;
    /// Unsigned distance from `point` to the closest triangle.
    double nearest_distance(const Vec3& point) const;

    const Vec3& normal(std::uint32_t triangle) const { return normals_[triangle]; }
    std::uint32_t tag(std::uint32_t triangle) const { return tags_[triangle]; }

private:
    // Triangle in permutation order, prepared for intersection.
    struct Packed {
        Vec3 a, e1, e2;
        std::uint32_t id;
    };

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> permutation_;
    std::vector<Packed> packed_;
    // Per-triangle data indexed by triangle id.
    std::vector<std::array<Vec3, 3>> corners_;
    std::vector<Vec3> normals_;
    std::vector<std::uint32_t> tags_;
};

inline std::optional<RayHit> ray_query(const BvhIndex& bvh, const Vec3& origin, const Vec3& direction,
                                       double t_max) {
    return bvh.ray_query(origin, direction, t_max);
}

/// Moller-Trumbore, two-sided. Returns the hit parameter if 0 <= t <= t_max.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& a, const Vec3& b,
                                         const Vec3& c, double t_max);

/// Reference nearest hit over all triangles; ties go to the lower triangle id.
std::optional<RayHit> brute_force_query(const TriangleMesh& mesh, const Vec3& origin, const Vec3& direction,
                                        double t_max);

}  // namespace sdfshadow

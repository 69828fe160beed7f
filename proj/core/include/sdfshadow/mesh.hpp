#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sdfshadow/math.hpp"

namespace sdfshadow {

using TriangleIndices = std::array<std::uint32_t, 3>;

struct LoadReport {
    std::size_t triangles_kept = 0;
    std::size_t triangles_dropped = 0;  // degenerate (area below threshold)
};

/// Triangles with area below this (world units squared) are dropped at load.
inline constexpr double kDegenerateArea = 1e-12;

/// Indexed triangle soup with per-triangle geometric normals. Immutable once
/// built; every constructor path enforces the index and normal invariants.
class TriangleMesh {
public:
    TriangleMesh() = default;

    /// Drops degenerate triangles and recomputes normals and bounds. Throws
    /// FormatError for out-of-range indices.
    static TriangleMesh build(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles,
                              LoadReport* report = nullptr);

    std::span<const Vec3> vertices() const { return vertices_; }
    std::span<const TriangleIndices> triangles() const { return triangles_; }
    std::span<const Vec3> normals() const { return normals_; }
    const Box3& bounds() const { return bounds_; }
    std::size_t triangle_count() const { return triangles_.size(); }
    bool empty() const { return triangles_.empty(); }

    std::array<Vec3, 3> corners(std::size_t tri) const {
        const auto& t = triangles_[tri];
        return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
    }

    /// Per-triangle tag carried through merges (e.g. the source part index).
    std::span<const std::uint32_t> tags() const { return tags_; }
    TriangleMesh with_tag(std::uint32_t tag) const;

    TriangleMesh transformed(const Affine3& xf) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<TriangleIndices> triangles_;
    std::vector<Vec3> normals_;
    std::vector<std::uint32_t> tags_;
    Box3 bounds_;

    friend TriangleMesh merge(std::span<const TriangleMesh> parts);
};

/// Concatenates meshes; triangle ids follow input order.
TriangleMesh merge(std::span<const TriangleMesh> parts);

/// Parses the OBJ subset (v and f records; polygons fan-triangulated; other
/// records ignored), applies `transform` and builds the mesh. The load report
/// is written to `diagnostics` when provided.
TriangleMesh load_mesh(std::string_view source, const Affine3& transform = Affine3::identity(),
                       std::ostream* diagnostics = nullptr, LoadReport* report = nullptr);

TriangleMesh load_mesh_file(const std::string& path, const Affine3& transform = Affine3::identity(),
                            std::ostream* diagnostics = nullptr);

/// Writes v/f records; used for bundled assets and debugging.
void write_obj(std::ostream& out, const TriangleMesh& mesh);

}  // namespace sdfshadow

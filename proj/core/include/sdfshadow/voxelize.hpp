#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sdfshadow/error.hpp"
#include "sdfshadow/grid.hpp"
#include "sdfshadow/mesh.hpp"

namespace sdfshadow {

/// Binary surface occupancy. A cell is set iff some triangle overlaps its
/// closed box. Stored one byte per cell; the dump format packs bits.
class VoxelGrid {
public:
    VoxelGrid() = default;
    explicit VoxelGrid(GridSpec grid) : grid_(grid), cells_(grid.count(), 0) {}

    const GridSpec& grid() const { return grid_; }
    bool occupied(std::size_t idx) const { return cells_[idx] != 0; }
    bool occupied(int i, int j, int k) const { return cells_[grid_.index(i, j, k)] != 0; }
    void set(std::size_t idx, bool v = true) { cells_[idx] = v ? 1 : 0; }
    std::size_t occupied_count() const;

private:
    GridSpec grid_;
    std::vector<std::uint8_t> cells_;
};

class OutOfBoundsError : public ConfigError {
public:
    explicit OutOfBoundsError(std::vector<std::uint32_t> triangles);
    const std::vector<std::uint32_t>& triangles() const noexcept { return triangles_; }

private:
    std::vector<std::uint32_t> triangles_;
};

/// Exact separating-axis triangle/box overlap test (13 axes). Touching counts
/// as overlap, which keeps the voxelization conservative.
bool triangle_box_overlap(const Box3& box, const Vec3& a, const Vec3& b, const Vec3& c);

/// Conservative surface voxelization. Requires dims >= 2 per axis and bounds
/// containing the mesh; throws OutOfBoundsError listing offending triangles.
VoxelGrid voxelize(const TriangleMesh& mesh, const Dims& dims, const Box3& bounds);

/// Debug dump: header {dims 3 x u32, bounds 6 x f32} little-endian, then one
/// bit per cell in x-fastest order, LSB first.
void write_occupancy(std::ostream& out, const VoxelGrid& grid);
VoxelGrid read_occupancy(std::istream& in);

}  // namespace sdfshadow

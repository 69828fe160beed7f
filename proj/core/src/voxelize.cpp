#include "sdfshadow/voxelize.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "sdfshadow/io_util.hpp"
#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

std::size_t VoxelGrid::occupied_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

namespace {

std::string describe(const std::vector<std::uint32_t>& ids) {
    std::string s = "mesh extends outside voxel bounds; offending triangles:";
    for (std::size_t i = 0; i < ids.size() && i < 32; ++i) s += " " + std::to_string(ids[i]);
    if (ids.size() > 32) s += " ... (" + std::to_string(ids.size()) + " total)";
    return s;
}

}  // namespace

OutOfBoundsError::OutOfBoundsError(std::vector<std::uint32_t> triangles)
    : ConfigError(describe(triangles)), triangles_(std::move(triangles)) {}

bool triangle_box_overlap(const Box3& box, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 center = box.center();
    const Vec3 half = box.extent() * 0.5;
    const Vec3 v[3] = {a - center, b - center, c - center};
    const Vec3 e[3] = {v[1] - v[0], v[2] - v[1], v[0] - v[2]};

    const auto separated = [&](const Vec3& axis) {
        const double p0 = dot(v[0], axis), p1 = dot(v[1], axis), p2 = dot(v[2], axis);
        const double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) + half.z * std::abs(axis.z);
        return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
    };

    // Box face normals reduce to an AABB-vs-AABB check.
    for (int k = 0; k < 3; ++k) {
        if (std::min({v[0][k], v[1][k], v[2][k]}) > half[k] || std::max({v[0][k], v[1][k], v[2][k]}) < -half[k]) {
            return false;
        }
    }
    if (separated(cross(e[0], e[1]))) return false;
    const Vec3 units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& u : units) {
        for (const auto& edge : e) {
            const Vec3 axis = cross(u, edge);
            if (dot(axis, axis) == 0.0) continue;
            if (separated(axis)) return false;
        }
    }
    return true;
}

VoxelGrid voxelize(const TriangleMesh& mesh, const Dims& dims, const Box3& bounds) {
    const GridSpec grid{dims, bounds};
    grid.validate(2);

    const double slack = 1e-9 * std::max(1.0, bounds.diagonal());
    std::vector<std::uint32_t> outside;
    std::vector<Box3> tri_boxes(mesh.triangle_count());
    for (std::uint32_t t = 0; t < mesh.triangle_count(); ++t) {
        for (const auto& p : mesh.corners(t)) tri_boxes[t].expand(p);
        if (!bounds.contains(tri_boxes[t], slack)) outside.push_back(t);
    }
    if (!outside.empty()) throw OutOfBoundsError(std::move(outside));

    VoxelGrid out(grid);
    const Vec3 h = grid.cell_size();
    const auto cell_range = [&](const Box3& b, int axis) {
        const int lo = static_cast<int>(std::floor((b.lo[axis] - bounds.lo[axis]) / h[axis])) - 1;
        const int hi = static_cast<int>(std::floor((b.hi[axis] - bounds.lo[axis]) / h[axis])) + 1;
        return std::pair{std::clamp(lo, 0, dims[axis] - 1), std::clamp(hi, 0, dims[axis] - 1)};
    };

    // Parallel over z layers; each layer is written by exactly one chunk.
    parallel_for(0, static_cast<std::size_t>(dims[2]), 1, [&](std::size_t z0, std::size_t z1) {
        for (std::uint32_t t = 0; t < mesh.triangle_count(); ++t) {
            const auto [kz0, kz1] = cell_range(tri_boxes[t], 2);
            const int k_lo = std::max(kz0, static_cast<int>(z0));
            const int k_hi = std::min(kz1, static_cast<int>(z1) - 1);
            if (k_lo > k_hi) continue;
            const auto [i_lo, i_hi] = cell_range(tri_boxes[t], 0);
            const auto [j_lo, j_hi] = cell_range(tri_boxes[t], 1);
            const auto [a, b, c] = mesh.corners(t);
            for (int k = k_lo; k <= k_hi; ++k) {
                for (int j = j_lo; j <= j_hi; ++j) {
                    for (int i = i_lo; i <= i_hi; ++i) {
                        const std::size_t idx = grid.index(i, j, k);
                        if (out.occupied(idx)) continue;
                        if (triangle_box_overlap(grid.cell_box(i, j, k), a, b, c)) out.set(idx);
                    }
                }
            }
        }
    });
    return out;
}

void write_occupancy(std::ostream& out, const VoxelGrid& grid) {
    const GridSpec& g = grid.grid();
    for (int a = 0; a < 3; ++a) io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dims[a]));
    for (int a = 0; a < 3; ++a) io::write_le<float>(out, static_cast<float>(g.bounds.lo[a]));
    for (int a = 0; a < 3; ++a) io::write_le<float>(out, static_cast<float>(g.bounds.hi[a]));
    std::uint8_t byte = 0;
    int bit = 0;
    for (std::size_t i = 0; i < g.count(); ++i) {
        if (grid.occupied(i)) byte |= static_cast<std::uint8_t>(1u << bit);
        if (++bit == 8) {
            out.put(static_cast<char>(byte));
            byte = 0;
            bit = 0;
        }
    }
    if (bit) out.put(static_cast<char>(byte));
    if (!out) throw IoError("failed writing occupancy dump");
}

VoxelGrid read_occupancy(std::istream& in) {
    GridSpec g;
    for (int a = 0; a < 3; ++a) g.dims[a] = static_cast<int>(io::read_le<std::uint32_t>(in));
    for (int a = 0; a < 3; ++a) g.bounds.lo[a] = io::read_le<float>(in);
    for (int a = 0; a < 3; ++a) g.bounds.hi[a] = io::read_le<float>(in);
    g.validate(1);
    VoxelGrid grid(g);
    std::size_t i = 0;
    while (i < g.count()) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) throw FormatError("truncated occupancy dump");
        for (int bit = 0; bit < 8 && i < g.count(); ++bit, ++i) grid.set(i, (ch >> bit) & 1);
    }
    return grid;
}

}  // namespace sdfshadow

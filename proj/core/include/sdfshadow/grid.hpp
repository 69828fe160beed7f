#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "sdfshadow/math.hpp"

namespace sdfshadow {

using Dims = std::array<int, 3>;

/// Uniform grid over a world box. Values live at cell centers; linear index
/// is x-fastest.
struct GridSpec {
    Dims dims{0, 0, 0};
    Box3 bounds;

    std::size_t count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
    }
    Vec3 cell_size() const {
        const Vec3 e = bounds.extent();
        return {e.x / dims[0], e.y / dims[1], e.z / dims[2]};
    }
    double cell_diagonal() const { return length(cell_size()); }
    double min_cell_size() const { return min_component(cell_size()); }
    double max_cell_size() const { return max_component(cell_size()); }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
    }
    std::array<int, 3> coords(std::size_t idx) const {
        const auto nx = static_cast<std::size_t>(dims[0]), ny = static_cast<std::size_t>(dims[1]);
        return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny), static_cast<int>(idx / (nx * ny))};
    }
    Vec3 cell_center(int i, int j, int k) const {
        const Vec3 h = cell_size();
        return bounds.lo + Vec3{(i + 0.5) * h.x, (j + 0.5) * h.y, (k + 0.5) * h.z};
    }
    Vec3 cell_center(std::size_t idx) const {
        const auto c = coords(idx);
        return cell_center(c[0], c[1], c[2]);
    }
    Box3 cell_box(int i, int j, int k) const {
        const Vec3 h = cell_size();
        const Vec3 lo = bounds.lo + Vec3{i * h.x, j * h.y, k * h.z};
        return {lo, lo + h};
    }
    bool same_shape(const GridSpec& o) const { return dims == o.dims && bounds == o.bounds; }

    /// Throws ConfigError unless every axis has at least `min_cells` cells and
    /// the bounds have positive extent.
    void validate(int min_cells = 1) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

}  // namespace sdfshadow

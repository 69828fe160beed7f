#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdfshadow/grid.hpp"

namespace sdfshadow {

/// Uniform scalar field of signed distances (world units) stored at cell
/// centers. Used for both the coarse and the fine field.
struct DistanceField {
    GridSpec grid;
    std::vector<float> values;
    float beta = 0.0f;         // subtracted from the flooded distances
    float bias = 0.0f;         // cumulative thickening applied by apply_bias
    std::uint64_t frame = 0;

    DistanceField() = default;
    DistanceField(GridSpec g, float fill) : grid(g), values(g.count(), fill) {}

    float at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
    float& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }

    friend bool operator==(const DistanceField&, const DistanceField&) = default;
};

struct FieldSample {
    double value = 0;
    bool in_bounds = false;
};

/// Trilinear interpolation between the 8 surrounding cell centers. Outside the
/// center lattice the coordinates clamp to the border; points outside the
/// field bounds additionally report in_bounds = false.
inline FieldSample sample_trilinear(const DistanceField& field, const Vec3& p) {
    const GridSpec& g = field.grid;
    const Vec3 h = g.cell_size();
    int base[3];
    double frac[3];
    for (int a = 0; a < 3; ++a) {
        const int n = g.dims[a];
        double u = (p[a] - g.bounds.lo[a]) / h[a] - 0.5;
        u = std::clamp(u, 0.0, static_cast<double>(n - 1));
        int i0 = static_cast<int>(u);
        if (i0 > n - 2) i0 = std::max(0, n - 2);
        base[a] = i0;
        frac[a] = n > 1 ? u - i0 : 0.0;
    }
    const auto nx = static_cast<std::size_t>(g.dims[0]);
    const auto nxy = nx * static_cast<std::size_t>(g.dims[1]);
    const std::size_t sx = g.dims[0] > 1 ? 1 : 0;
    const std::size_t sy = g.dims[1] > 1 ? nx : 0;
    const std::size_t sz = g.dims[2] > 1 ? nxy : 0;
    const std::size_t i000 = base[0] + nx * base[1] + nxy * base[2];
    const float* v = field.values.data();
    const auto lerp_x = [&](std::size_t i) {
        const double a = v[i], b = v[i + sx];
        return a + frac[0] * (b - a);
    };
    const double fy = frac[1], fz = frac[2];
    const double c00 = lerp_x(i000);
    const double c10 = lerp_x(i000 + sy);
    const double c01 = lerp_x(i000 + sz);
    const double c11 = lerp_x(i000 + sz + sy);
    const double c0 = c00 + fy * (c10 - c00);
    const double c1 = c01 + fy * (c11 - c01);
    return {c0 + fz * (c1 - c0), g.bounds.contains(p)};
}

/// Every value reduced by `bias` (>= 0); metadata accumulates the total.
DistanceField apply_bias(DistanceField field, double bias);

/// Resamples `source` at the cell centers of `target`.
DistanceField resample(const DistanceField& source, const GridSpec& target);

/// Plane of values perpendicular to `axis` at cell `index`. Image x/y follow
/// the remaining two axes in increasing order (x-plane: (y, z); y-plane: (x, z);
/// z-plane: (x, y)).
struct ScalarImage {
    int width = 0, height = 0;
    std::vector<float> pixels;
    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

ScalarImage slice(const DistanceField& field, int axis, int index);

/// Diverging palette: negative values map to red, positive ones to a
/// blue-to-white ramp over [0, scale]. Returns 8-bit RGB triples.
std::vector<std::uint8_t> signed_colors(const ScalarImage& img, double scale);

/// Field file format version written by save_field.
inline constexpr std::uint32_t kFieldFormatVersion = 1;

void save_field(std::ostream& out, const DistanceField& field);
DistanceField load_field(std::istream& in);
void save_field(const std::string& path, const DistanceField& field);
DistanceField load_field(const std::string& path);

}  // namespace sdfshadow

#include "sdfshadow/jfa.hpp"

#include <algorithm>
#include <bit>

#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

SeedGrid::SeedGrid(GridSpec grid) : grid_(grid), seeds_(grid.count(), kEmpty) {
    for (int a = 0; a < 3; ++a) {
        if (grid.dims[a] > kMaxAxisCells) throw ConfigError("jump flooding grid limited to 1024 cells per axis");
    }
}

std::size_t SeedGrid::seed_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < seeds_.size(); ++i) {
        const auto c = grid_.coords(i);
        n += seeds_[i] == pack(c[0], c[1], c[2]);
    }
    return n;
}

bool SeedGrid::complete() const {
    return std::none_of(seeds_.begin(), seeds_.end(), [](std::int32_t s) { return s == kEmpty; });
}

double SeedGrid::distance_sq(std::size_t idx) const {
    const std::int32_t s = seeds_[idx];
    if (s == kEmpty) return kInfinity;
    const auto c = grid_.coords(idx);
    const auto sc = unpack(s);
    const Vec3 h = grid_.cell_size();
    const double dx = (sc[0] - c[0]) * h.x, dy = (sc[1] - c[1]) * h.y, dz = (sc[2] - c[2]) * h.z;
    return dx * dx + dy * dy + dz * dz;
}

SeedGrid jfa_init(const VoxelGrid& voxels) {
    SeedGrid seeds(voxels.grid());
    const GridSpec& g = voxels.grid();
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.count(); ++i) {
        if (!voxels.occupied(i)) continue;
        const auto c = g.coords(i);
        seeds.seed(i) = SeedGrid::pack(c[0], c[1], c[2]);
        ++count;
    }
    if (count == 0) throw NoSeedError();
    return seeds;
}

SeedGrid jfa_step(const SeedGrid& seeds, int offset) {
    const GridSpec& g = seeds.grid();
    if (offset < 1) throw InvariantError("jump flooding offset must be positive");
    const Vec3 h = g.cell_size();
    const double hx2 = h.x * h.x, hy2 = h.y * h.y, hz2 = h.z * h.z;
    SeedGrid out = seeds;
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];

    parallel_for(0, static_cast<std::size_t>(nz) * ny, 8, [&](std::size_t row0, std::size_t row1) {
        for (std::size_t row = row0; row < row1; ++row) {
            const int j = static_cast<int>(row % ny), k = static_cast<int>(row / ny);
            for (int i = 0; i < nx; ++i) {
                const std::size_t idx = g.index(i, j, k);
                std::int32_t best = seeds.seed(idx);
                double best_d2 = kInfinity;
                if (best != SeedGrid::kEmpty) {
                    const auto s = SeedGrid::unpack(best);
                    best_d2 = (s[0] - i) * (s[0] - i) * hx2 + (s[1] - j) * (s[1] - j) * hy2 +
                              (s[2] - k) * (s[2] - k) * hz2;
                }
                for (int dz = -offset; dz <= offset; dz += offset) {
                    const int kk = k + dz;
                    if (kk < 0 || kk >= nz) continue;
                    for (int dy = -offset; dy <= offset; dy += offset) {
                        const int jj = j + dy;
                        if (jj < 0 || jj >= ny) continue;
                        for (int dx = -offset; dx <= offset; dx += offset) {
                            const int ii = i + dx;
                            if (ii < 0 || ii >= nx) continue;
                            const std::int32_t cand = seeds.seed(g.index(ii, jj, kk));
                            if (cand == SeedGrid::kEmpty || cand == best) continue;
                            const auto s = SeedGrid::unpack(cand);
                            const double d2 = (s[0] - i) * (s[0] - i) * hx2 + (s[1] - j) * (s[1] - j) * hy2 +
                                              (s[2] - k) * (s[2] - k) * hz2;
                            if (d2 < best_d2 || (d2 == best_d2 && cand < best)) {
                                best = cand;
                                best_d2 = d2;
                            }
                        }
                    }
                }
                out.seed(idx) = best;
            }
        }
    });
    return out;
}

std::vector<int> jfa_schedule(const Dims& dims) {
    const auto largest = static_cast<unsigned>(std::max({dims[0], dims[1], dims[2], 1}));
    std::vector<int> offsets;
    for (unsigned n = std::bit_ceil(largest) / 2; n >= 1; n /= 2) offsets.push_back(static_cast<int>(n));
    return offsets;
}

SeedGrid jfa_run(const VoxelGrid& voxels, const std::function<void(int, const SeedGrid&)>& observer) {
    SeedGrid seeds = jfa_init(voxels);
    for (const int offset : jfa_schedule(voxels.grid().dims)) {
        seeds = jfa_step(seeds, offset);
        if (observer) observer(offset, seeds);
    }
    if (!seeds.complete()) throw InvariantError("jump flooding left empty cells");
    return seeds;
}

DistanceField seeds_to_sdf(const SeedGrid& seeds, double beta) {
    if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
    DistanceField field(seeds.grid(), 0.0f);
    field.beta = static_cast<float>(beta);
    parallel_for(0, field.values.size(), 1 << 14, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            field.values[i] = static_cast<float>(std::sqrt(seeds.distance_sq(i)) - beta);
        }
    });
    return field;
}

double default_beta(const GridSpec& coarse) { return kDefaultBetaFraction * coarse.cell_diagonal(); }

}  // namespace sdfshadow

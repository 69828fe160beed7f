#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sdfshadow/error.hpp"
#include "sdfshadow/field.hpp"
#include "sdfshadow/voxelize.hpp"

namespace sdfshadow {

/// Per-cell closest-seed record for jump flooding. Seeds are packed as
/// x << 20 | y << 10 | z, so integer order is lexicographic (x, y, z) order;
/// this limits each axis to 1024 cells.
class SeedGrid {
public:
    static constexpr std::int32_t kEmpty = -1;
    static constexpr int kMaxAxisCells = 1024;

    SeedGrid() = default;
    explicit SeedGrid(GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    std::int32_t seed(std::size_t idx) const { return seeds_[idx]; }
    std::int32_t& seed(std::size_t idx) { return seeds_[idx]; }
    std::size_t seed_count() const;  // cells that hold their own coordinates
    bool complete() const;           // no EMPTY cell

    static std::int32_t pack(int i, int j, int k) { return (i << 20) | (j << 10) | k; }
    static std::array<int, 3> unpack(std::int32_t s) { return {s >> 20, (s >> 10) & 1023, s & 1023}; }

    /// World-space squared distance between the centers of cell `idx` and
    /// its recorded seed; +inf when empty.
    double distance_sq(std::size_t idx) const;

    friend bool operator==(const SeedGrid&, const SeedGrid&) = default;

private:
    GridSpec grid_;
    std::vector<std::int32_t> seeds_;
};

class NoSeedError : public InvariantError {
public:
    NoSeedError() : InvariantError("jump flooding needs at least one occupied voxel") {}
};

/// Occupied cells seed themselves; everything else starts EMPTY.
SeedGrid jfa_init(const VoxelGrid& voxels);

/// One flooding pass: each cell looks at itself and its 26 neighbours at
/// +-offset per axis and keeps the closest seed (ties: smaller packed seed).
/// Reads only `seeds`, so the result does not depend on evaluation order.
SeedGrid jfa_step(const SeedGrid& seeds, int offset);

/// Offsets n/2, n/4, ..., 1 with n the smallest power of two >= max(dims).
std::vector<int> jfa_schedule(const Dims& dims);

/// Full flood. `observer`, when set, sees the grid after every step.
SeedGrid jfa_run(const VoxelGrid& voxels, const std::function<void(int offset, const SeedGrid&)>& observer = {});

/// value(cell) = |center(cell) - center(seed(cell))| - beta.
DistanceField seeds_to_sdf(const SeedGrid& seeds, double beta);

/// Default beta as a fraction of the coarse cell diagonal.
inline constexpr double kDefaultBetaFraction = 0.1;
double default_beta(const GridSpec& coarse);

}  // namespace sdfshadow

#include "sdfshadow/grid.hpp"

#include <string>

#include "sdfshadow/error.hpp"

namespace sdfshadow {

void GridSpec::validate(int min_cells) const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < min_cells) {
            throw ConfigError("grid needs at least " + std::to_string(min_cells) + " cells per axis, got " +
                              std::to_string(dims[a]) + " on axis " + std::to_string(a));
        }
        if (!(bounds.hi[a] > bounds.lo[a])) throw ConfigError("grid bounds have non-positive extent");
    }
}

}  // namespace sdfshadow

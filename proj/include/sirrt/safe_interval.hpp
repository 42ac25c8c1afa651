#pragma once

#include <vector>

#include "sirrt/scene.hpp"

namespace sirrt {

/// One maximal run of collision-free ticks, as a closed time interval whose
/// endpoints lie on the tick grid.
struct SafeInterval {
    int tick_lo = 0;
    int tick_hi = 0;
    double t_l = 0.0;
    double t_u = 0.0;

    bool operator==(const SafeInterval& o) const {
        return tick_lo == o.tick_lo && tick_hi == o.tick_hi;
    }
    bool contains(double t) const { return t >= t_l && t <= t_u; }
};

/// Disjoint, sorted safe intervals of one configuration.
using SafeIntervalSet = std::vector<SafeInterval>;

/// Converts a per-tick collision bitmap (true = colliding) into the set of
/// maximal safe runs.
SafeIntervalSet intervals_from_collision_ticks(const std::vector<char>& colliding,
                                               const TimeGrid& grid);

}  // namespace sirrt

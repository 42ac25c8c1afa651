#include "sirrt/safe_interval.hpp"

namespace sirrt {

SafeIntervalSet intervals_from_collision_ticks(const std::vector<char>& colliding,
                                               const TimeGrid& grid) {
    SafeIntervalSet out;
    const int n = static_cast<int>(colliding.size());
    int k = 0;
    while (k < n) {
        if (colliding[k]) {
            ++k;
            continue;
        }
        const int lo = k;
        while (k < n && !colliding[k]) ++k;
        const int hi = k - 1;
        out.push_back(SafeInterval{lo, hi, grid.tick_time(lo), grid.tick_time(hi)});
    }
    return out;
}

}  // namespace sirrt

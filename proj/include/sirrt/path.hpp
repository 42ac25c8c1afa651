#pragma once

#include <vector>

#include "sirrt/robot.hpp"

namespace sirrt {

/// One waypoint of a timed path. The robot reaches q at `arrive`, stays
/// there until `wait_until` (== `depart`, the start of the move toward the
/// next waypoint; both equal `arrive` on the final waypoint), then moves at
/// constant joint-space velocity. Motion between waypoints is linear
/// interpolation; waits are implicit in depart - arrive.
struct PathSegment {
    Configuration q;
    double wait_until = 0.0;
    double depart = 0.0;
    double arrive = 0.0;
};

struct TimedPath {
    std::vector<PathSegment> segments;
    double t_arrival = 0.0;
    /// Index of the waypoint where the two trees met; the suffix from here
    /// is what wait trimming re-times.
    int meet_index = 0;
};

/// Configuration at time t under the piecewise wait/move interpolation rule.
Configuration path_state_at(const TimedPath& path, double t);

}  // namespace sirrt

#pragma once

#include <string>
#include <vector>

#include "sirrt/path.hpp"
#include "sirrt/safe_interval.hpp"
#include "sirrt/scene.hpp"

namespace sirrt {

/// Deliberately naive ground truth: no broad phase, no shared index, only
/// the scalar narrow-phase primitives from geometry.hpp. An indexing bug in
/// the collision engine cannot hide here.

enum class ViolationKind { collision, continuity, speed, limits, interval };

struct Violation {
    double time = 0.0;
    ViolationKind kind = ViolationKind::collision;
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
    long checked_samples = 0;
};

struct ValidateParams {
    double v_max = 1.0;
    double step_bound = 3.0;          // max joint-space length of one segment
    double speed_epsilon = 1e-9;      // absorbs duration-reconstruction rounding
};

const char* violation_kind_name(ViolationKind kind);

/// True iff any link capsule of the robot at q intersects a static obstacle
/// or a dynamic obstacle positioned at time t. Self-contained per call.
bool naive_config_collides(const Scene& scene, const Configuration& q, double t);

/// Runs naive_config_collides independently at every tick and assembles the
/// safe runs. compute_safe_intervals must equal this exactly.
SafeIntervalSet naive_safe_intervals(const Scene& scene, const Configuration& q);

/// Samples the interpolated robot pose at `frequency` over [0, t_arrival]
/// and checks collisions, endpoint equality, t_arrival <= t_max, per-segment
/// speed, joint limits, and monotone timestamps.
/// Throws std::invalid_argument on a structurally malformed path.
ValidationReport validate_path(const TimedPath& path, const ProblemInstance& instance,
                               double frequency, const ValidateParams& params = {});

}  // namespace sirrt

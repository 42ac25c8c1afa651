#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sirrt/geometry.hpp"
#include "sirrt/robot.hpp"

namespace sirrt {

/// Uniform time discretization: tick k maps to time k / frequency,
/// tick_count = floor(t_max * frequency) + 1.
struct TimeGrid {
    double t_max = 20.0;
    double frequency = 30.0;
    int tick_count = 601;

    static TimeGrid make(double t_max, double frequency);

    double tick_time(int k) const { return static_cast<double>(k) / frequency; }
    double end_time() const { return tick_time(tick_count - 1); }

    /// Largest k with tick_time(k) <= t (clamped to the grid).
    int tick_floor(double t) const;
    /// Smallest k with tick_time(k) >= t; returns tick_count if none.
    int tick_ceil(double t) const;
};

struct DynamicObstacle {
    double radius = 0.0;
    struct Waypoint {
        double time;
        Vec3 center;
    };
    /// Strictly increasing times, first at 0, last at t_max.
    std::vector<Waypoint> waypoints;
};

/// Piecewise-linear interpolation; exact at waypoints.
/// Throws std::out_of_range for t outside [0, t_max].
Vec3 position_at(const DynamicObstacle& o, double t);

struct StaticObstacle {
    std::variant<Sphere, Capsule> shape;
};

struct Scene {
    RobotModel robot;
    std::vector<StaticObstacle> statics;
    std::vector<DynamicObstacle> dynamics;
    TimeGrid grid;
    Aabb bounds{{-1, -1, -1}, {1, 1, 1}};
};

struct ProblemInstance {
    Scene scene;
    Configuration q_start;
    Configuration q_goal;
    std::uint64_t seed = 0;
};

struct GeneratorParams {
    double radius_lo = 0.05;
    double radius_hi = 0.10;
    double speed_lo = 0.0;
    double speed_hi = 1.0;
    double direction_interval_lo = 0.5;  // seconds between direction resamples
    double direction_interval_hi = 2.0;
    double bounds_half_width = 1.0;      // workspace cube half-width around the base
    double min_start_goal_distance = 1.0;
    int max_retries_per_obstacle = 1000;
    double t_max = 20.0;
    double frequency = 30.0;
};

/// Deterministic instance generator. Obstacle i is derived from
/// mix_seed(seed, i), so instances with the same seed share obstacle
/// prefixes regardless of K. Each obstacle is rejection-sampled until it
/// never collides with the robot held at q_start or q_goal at any tick.
/// Throws std::runtime_error when the retry budget is exhausted.
ProblemInstance generate_instance(std::uint64_t seed, int k, const GeneratorParams& params,
                                  const RobotModel& robot);

/// Base plus `extra` fresh obstacles; the base's obstacles are unchanged.
ProblemInstance incremental_extend(const ProblemInstance& base, int extra,
                                   const GeneratorParams& params);

}  // namespace sirrt

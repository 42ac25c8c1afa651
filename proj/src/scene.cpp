#include "sirrt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sirrt/rng.hpp"

namespace sirrt {

TimeGrid TimeGrid::make(double t_max, double frequency) {
    if (!(t_max > 0.0) || !(frequency > 0.0))
        throw std::invalid_argument("time grid: t_max and frequency must be positive");
    TimeGrid g;
    g.t_max = t_max;
    g.frequency = frequency;
    g.tick_count = static_cast<int>(std::floor(t_max * frequency)) + 1;
    return g;
}

int TimeGrid::tick_floor(double t) const {
    int k = static_cast<int>(std::floor(t * frequency));
    while (k > 0 && tick_time(k) > t) --k;
    while (k + 1 < tick_count && tick_time(k + 1) <= t) ++k;
    return std::clamp(k, 0, tick_count - 1);
}

int TimeGrid::tick_ceil(double t) const {
    int k = static_cast<int>(std::ceil(t * frequency));
    if (k < 0) k = 0;
    while (k < tick_count && tick_time(k) < t) ++k;
    while (k > 0 && tick_time(k - 1) >= t) --k;
    return k;
}

Vec3 position_at(const DynamicObstacle& o, double t) {
    const auto& wps = o.waypoints;
    if (wps.empty()) throw std::out_of_range("position_at: obstacle has no waypoints");
    if (t < wps.front().time || t > wps.back().time)
        throw std::out_of_range("position_at: t=" + std::to_string(t) +
                                " outside trajectory span");
    // first waypoint with time >= t
    auto it = std::lower_bound(wps.begin(), wps.end(), t,
                               [](const DynamicObstacle::Waypoint& w, double v) {
                                   return w.time < v;
                               });
    if (it->time == t) return it->center;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double s = (t - lo.time) / (hi.time - lo.time);
    return lo.center + (hi.center - lo.center) * s;
}

namespace {

Vec3 sphere_uniform_direction(Rng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

// Advances p along dir*speed for dt seconds with elastic reflection at the
// box faces, appending a waypoint at every face hit.
void advance_with_reflection(Vec3& p, Vec3& dir, double speed, double t0, double dt,
                             const Aabb& box, std::vector<DynamicObstacle::Waypoint>& out) {
    double remaining = dt;
    double t = t0;
    int guard = 0;
    while (remaining > 1e-12 && speed > 0.0 && ++guard < 64) {
        // time to the nearest face along each axis
        double hit = remaining;
        int axis = -1;
        const double d[3] = {dir.x, dir.y, dir.z};
        const double c[3] = {p.x, p.y, p.z};
        const double lo[3] = {box.min.x, box.min.y, box.min.z};
        const double hi[3] = {box.max.x, box.max.y, box.max.z};
        for (int i = 0; i < 3; ++i) {
            if (d[i] > 0.0) {
                const double tt = (hi[i] - c[i]) / (d[i] * speed);
                if (tt < hit) {
                    hit = tt;
                    axis = i;
                }
            } else if (d[i] < 0.0) {
                const double tt = (lo[i] - c[i]) / (d[i] * speed);
                if (tt < hit) {
                    hit = tt;
                    axis = i;
                }
            }
        }
        const double step = std::max(0.0, std::min(hit, remaining));
        p += dir * (speed * step);
        t += step;
        remaining -= step;
        if (axis >= 0 && step == hit && remaining > 1e-12) {
            if (axis == 0) dir.x = -dir.x;
            if (axis == 1) dir.y = -dir.y;
            if (axis == 2) dir.z = -dir.z;
            p.x = std::clamp(p.x, box.min.x, box.max.x);
            p.y = std::clamp(p.y, box.min.y, box.max.y);
            p.z = std::clamp(p.z, box.min.z, box.max.z);
            out.push_back({t, p});
        }
    }
    if (remaining > 0.0 && speed == 0.0) t += remaining;
}

DynamicObstacle sample_obstacle_trajectory(Rng& rng, const GeneratorParams& params,
                                           const Aabb& bounds) {
    DynamicObstacle o;
    o.radius = rng.uniform(params.radius_lo, params.radius_hi);
    const double speed = rng.uniform(params.speed_lo, params.speed_hi);
    Vec3 p{rng.uniform(bounds.min.x, bounds.max.x), rng.uniform(bounds.min.y, bounds.max.y),
           rng.uniform(bounds.min.z, bounds.max.z)};
    o.waypoints.push_back({0.0, p});
    double t = 0.0;
    while (t < params.t_max) {
        const double dt = std::min(
            rng.uniform(params.direction_interval_lo, params.direction_interval_hi),
            params.t_max - t);
        Vec3 dir = sphere_uniform_direction(rng);
        advance_with_reflection(p, dir, speed, t, dt, bounds, o.waypoints);
        t += dt;
        o.waypoints.push_back({t, p});
    }
    o.waypoints.back().time = params.t_max;
    return o;
}

// True iff the obstacle intersects any of the given capsules at any tick.
bool hits_capsules_at_any_tick(const DynamicObstacle& o, const TimeGrid& grid,
                               const std::vector<Capsule>& caps) {
    for (int k = 0; k < grid.tick_count; ++k) {
        const Sphere s{position_at(o, grid.tick_time(k)), o.radius};
        for (const Capsule& c : caps) {
            if (capsule_sphere_collides(c, s)) return true;
        }
    }
    return false;
}

bool statics_collide_with(const std::vector<StaticObstacle>& statics,
                          const std::vector<Capsule>& caps) {
    for (const StaticObstacle& s : statics) {
        for (const Capsule& c : caps) {
            const bool hit = std::visit(
                [&](const auto& shape) {
                    using T = std::decay_t<decltype(shape)>;
                    if constexpr (std::is_same_v<T, Sphere>)
                        return capsule_sphere_collides(c, shape);
                    else
                        return capsule_capsule_collides(c, shape);
                },
                s.shape);
            if (hit) return true;
        }
    }
    return false;
}

DynamicObstacle generate_obstacle(std::uint64_t instance_seed, int index,
                                  const GeneratorParams& params, const Scene& scene,
                                  const std::vector<Capsule>& caps_start,
                                  const std::vector<Capsule>& caps_goal) {
    Rng rng(mix_seed(instance_seed, 0x0b57ac1eULL, static_cast<std::uint64_t>(index)));
    for (int attempt = 0; attempt < params.max_retries_per_obstacle; ++attempt) {
        DynamicObstacle o = sample_obstacle_trajectory(rng, params, scene.bounds);
        if (!hits_capsules_at_any_tick(o, scene.grid, caps_start) &&
            !hits_capsules_at_any_tick(o, scene.grid, caps_goal))
            return o;
    }
    throw std::runtime_error("generate_instance: obstacle " + std::to_string(index) +
                             " rejected " + std::to_string(params.max_retries_per_obstacle) +
                             " times; instance over-constrained");
}

Configuration sample_within_limits(Rng& rng, const RobotModel& robot) {
    Configuration q(robot.dof());
    for (std::size_t i = 0; i < robot.dof(); ++i)
        q[i] = rng.uniform(robot.joints[i].lo, robot.joints[i].hi);
    return q;
}

}  // namespace

ProblemInstance generate_instance(std::uint64_t seed, int k, const GeneratorParams& params,
                                  const RobotModel& robot) {
    if (k < 0) throw std::invalid_argument("generate_instance: k must be >= 0");
    robot.validate();

    ProblemInstance inst;
    inst.seed = seed;
    inst.scene.robot = robot;
    inst.scene.grid = TimeGrid::make(params.t_max, params.frequency);
    const double h = params.bounds_half_width;
    inst.scene.bounds = Aabb{{-h, -h, -h}, {h, h, h}};

    Rng sg_rng(mix_seed(seed, 0x57a97ULL));  // start/goal stream
    for (int attempt = 0;; ++attempt) {
        if (attempt >= params.max_retries_per_obstacle)
            throw std::runtime_error("generate_instance: could not sample start/goal");
        inst.q_start = sample_within_limits(sg_rng, robot);
        inst.q_goal = sample_within_limits(sg_rng, robot);
        if (configuration_distance(inst.q_start, inst.q_goal) <= params.min_start_goal_distance)
            continue;
        const auto caps_s = forward_kinematics(robot, inst.q_start);
        const auto caps_g = forward_kinematics(robot, inst.q_goal);
        if (statics_collide_with(inst.scene.statics, caps_s) ||
            statics_collide_with(inst.scene.statics, caps_g))
            continue;
        break;
    }

    const auto caps_start = forward_kinematics(robot, inst.q_start);
    const auto caps_goal = forward_kinematics(robot, inst.q_goal);
    inst.scene.dynamics.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        inst.scene.dynamics.push_back(
            generate_obstacle(seed, i, params, inst.scene, caps_start, caps_goal));
    return inst;
}

ProblemInstance incremental_extend(const ProblemInstance& base, int extra,
                                   const GeneratorParams& params) {
    if (extra < 0) throw std::invalid_argument("incremental_extend: extra must be >= 0");
    ProblemInstance inst = base;
    const auto caps_start = forward_kinematics(base.scene.robot, base.q_start);
    const auto caps_goal = forward_kinematics(base.scene.robot, base.q_goal);
    const int k0 = static_cast<int>(base.scene.dynamics.size());
    for (int i = k0; i < k0 + extra; ++i)
        inst.scene.dynamics.push_back(
            generate_obstacle(base.seed, i, params, inst.scene, caps_start, caps_goal));
    return inst;
}

}  // namespace sirrt

// Space-time RRT-Connect baseline: explicit (q, t) states, no safe
// intervals. Every wait is verified tick by tick, which is exactly the cost
// the interval representation avoids.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sirrt/planner.hpp"

namespace sirrt {

namespace {

struct StNode {
    Configuration q;
    double time;  // start tree: arrival at q; goal tree: departure from q
    std::int32_t parent;
    double edge_depart;
    double edge_arrive;
};

struct StTree {
    TreeDirection direction;
    std::vector<StNode> nodes;
};

double space_time_dist2(const StNode& n, const Configuration& q, double t, double v_max) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double d = n.q[i] - q[i];
        s += d * d;
    }
    const double dt = v_max * (n.time - t);
    return s + dt * dt;
}

std::int32_t nearest_space_time(const StTree& tree, const Configuration& q, double t,
                                double v_max) {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_id = -1;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const double d2 = space_time_dist2(tree.nodes[i], q, t, v_max);
        if (d2 < best) {
            best = d2;
            best_id = static_cast<std::int32_t>(i);
        }
    }
    return best_id;
}

bool same_config(const Configuration& a, const Configuration& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Per-tick check that staying at q over [t_from, t_to] is collision-free.
bool wait_collides(const CollisionEngine& engine, const Configuration& q, double t_from,
                   double t_to) {
    if (t_to < t_from) return false;
    const TimeGrid& grid = engine.grid();
    for (int k = grid.tick_ceil(t_from); k < grid.tick_count; ++k) {
        const double t = grid.tick_time(k);
        if (t > t_to) break;
        if (engine.config_collides(q, t)) return true;
    }
    return false;
}

Configuration step_toward(const Configuration& from, const Configuration& to, double max_step) {
    const double dist = configuration_distance(from, to);
    if (dist <= max_step) return to;
    Configuration q(from.size());
    const double s = max_step / dist;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = from[i] + s * (to[i] - from[i]);
    return q;
}

// Adds a node moving from/to the nearest node with the waiting and the move
// checked explicitly; returns the new node id or -1.
std::int32_t extend_st(const CollisionEngine& engine, StTree& tree, const Configuration& q_target,
                       double t_target, const PlannerParams& params) {
    const double horizon = engine.grid().end_time();
    const std::int32_t near_id = nearest_space_time(tree, q_target, t_target, params.v_max);
    const StNode& near = tree.nodes[static_cast<std::size_t>(near_id)];

    const Configuration q_new = step_toward(near.q, q_target, params.delta_planner);
    std::vector<Capsule> links;
    forward_kinematics_unchecked(engine.scene().robot, q_new, links);
    if (engine.statics_collide(links)) return -1;

    const double duration = configuration_distance(near.q, q_new) / params.v_max;
    if (tree.direction == TreeDirection::start) {
        const double t_min = near.time + duration;
        if (t_min > horizon) return -1;
        const double t_new = std::clamp(t_target, t_min, horizon);
        const double depart = t_new - duration;
        if (wait_collides(engine, near.q, near.time, depart)) return -1;
        if (engine.motion_collides(near.q, q_new, depart, t_new)) return -1;
        tree.nodes.push_back(StNode{q_new, t_new, near_id, depart, t_new});
    } else {
        const double t_max_new = near.time - duration;
        if (t_max_new < 0.0) return -1;
        const double t_new = std::clamp(t_target, 0.0, t_max_new);
        const double arrive = t_new + duration;
        if (engine.motion_collides(q_new, near.q, t_new, arrive)) return -1;
        if (wait_collides(engine, near.q, arrive, near.time)) return -1;
        tree.nodes.push_back(StNode{q_new, t_new, near_id, t_new, arrive});
    }
    return static_cast<std::int32_t>(tree.nodes.size()) - 1;
}

struct StMeet {
    std::int32_t start_leaf;
    std::int32_t goal_leaf;
};

std::optional<StMeet> connect_st(const CollisionEngine& engine, StTree& other,
                                 const Configuration& q_target, std::int32_t target_id,
                                 const StTree& current, const PlannerParams& params) {
    const StNode& target = current.nodes[static_cast<std::size_t>(target_id)];
    const double initial =
        configuration_distance(other.nodes[static_cast<std::size_t>(nearest_space_time(
                                               other, q_target, target.time, params.v_max))]
                                   .q,
                               q_target);
    const int max_steps = static_cast<int>(initial / params.delta_planner) + 2;

    for (int step = 0; step < max_steps; ++step) {
        // aim at the target's time so the greedy zero-wait extension lands
        // on a compatible side of it
        const std::int32_t id = extend_st(engine, other, q_target, target.time, params);
        if (id < 0) return std::nullopt;
        const StNode& n = other.nodes[static_cast<std::size_t>(id)];
        if (!same_config(n.q, q_target)) continue;

        const bool current_is_start = current.direction == TreeDirection::start;
        const double arrival = current_is_start ? target.time : n.time;
        const double departure = current_is_start ? n.time : target.time;
        if (arrival <= departure && !wait_collides(engine, q_target, arrival, departure)) {
            StMeet meet;
            meet.start_leaf = current_is_start ? target_id : id;
            meet.goal_leaf = current_is_start ? id : target_id;
            return meet;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

TimedPath unite_st(const StTree& start_tree, std::int32_t start_leaf, const StTree& goal_tree,
                   std::int32_t goal_leaf) {
    std::vector<std::int32_t> chain;
    for (std::int32_t i = start_leaf; i >= 0;
         i = start_tree.nodes[static_cast<std::size_t>(i)].parent)
        chain.push_back(i);
    std::reverse(chain.begin(), chain.end());

    TimedPath path;
    for (const std::int32_t i : chain) {
        const StNode& n = start_tree.nodes[static_cast<std::size_t>(i)];
        path.segments.push_back(PathSegment{n.q, n.time, n.time, n.time});
    }
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const StNode& child = start_tree.nodes[static_cast<std::size_t>(chain[i])];
        path.segments[i - 1].depart = child.edge_depart;
        path.segments[i - 1].wait_until = child.edge_depart;
    }
    path.meet_index = static_cast<int>(path.segments.size()) - 1;

    std::int32_t cur = goal_leaf;
    while (goal_tree.nodes[static_cast<std::size_t>(cur)].parent >= 0) {
        const StNode& c = goal_tree.nodes[static_cast<std::size_t>(cur)];
        path.segments.back().depart = c.edge_depart;
        path.segments.back().wait_until = c.edge_depart;
        const std::int32_t parent = c.parent;
        const StNode& p = goal_tree.nodes[static_cast<std::size_t>(parent)];
        path.segments.push_back(PathSegment{p.q, c.edge_arrive, c.edge_arrive, c.edge_arrive});
        cur = parent;
    }
    path.t_arrival = path.segments.back().arrive;
    return path;
}

}  // namespace

PlanResult plan_baseline_st(const ProblemInstance& instance, const PlannerParams& params) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    PlanResult result;
    PlanStats& stats = result.stats;
    const RobotModel& robot = instance.scene.robot;
    if (!robot.within_limits(instance.q_start) || !robot.within_limits(instance.q_goal)) {
        stats.failure_reason = "start or goal outside joint limits";
        return result;
    }

    const CollisionEngine engine(instance.scene);
    stats.index_build_seconds = engine.index_build_seconds();
    const double horizon = engine.grid().end_time();

    if (engine.config_collides(instance.q_start, 0.0)) {
        stats.failure_reason = "start configuration in collision at t=0";
        stats.wall_seconds = elapsed();
        return result;
    }
    if (engine.config_collides(instance.q_goal, horizon)) {
        stats.failure_reason = "goal configuration in collision at the horizon";
        stats.wall_seconds = elapsed();
        return result;
    }
    if (same_config(instance.q_start, instance.q_goal)) {
        TimedPath p;
        p.segments.push_back(PathSegment{instance.q_start, 0.0, 0.0, 0.0});
        result.path = p;
        stats.success = true;
        stats.t_arrival = stats.t_arrival_raw = 0.0;
        stats.wall_seconds = elapsed();
        return result;
    }

    StTree start_tree{TreeDirection::start, {}};
    StTree goal_tree{TreeDirection::goal, {}};
    start_tree.nodes.push_back(StNode{instance.q_start, 0.0, -1, 0.0, 0.0});
    goal_tree.nodes.push_back(StNode{instance.q_goal, horizon, -1, horizon, horizon});

    StTree* current = &start_tree;
    StTree* other = &goal_tree;
    Rng rng(mix_seed(params.rng_seed, 0x57ba5eULL));

    while (elapsed() < params.time_budget &&
           (params.max_iterations == 0 || stats.iterations < params.max_iterations)) {
        ++stats.iterations;

        const Configuration q_sampled = sample_configuration(rng, robot);
        const double t_sampled = rng.uniform(0.0, horizon);

        const std::int32_t added = extend_st(engine, *current, q_sampled, t_sampled, params);
        if (added < 0) {
            std::swap(current, other);
            continue;
        }

        const Configuration& q_new = current->nodes[static_cast<std::size_t>(added)].q;
        const auto meet = connect_st(engine, *other, q_new, added, *current, params);
        if (meet) {
            const TimedPath raw = unite_st(start_tree, meet->start_leaf, goal_tree,
                                           meet->goal_leaf);
            stats.t_arrival_raw = raw.t_arrival;
            result.path = raw;
            stats.t_arrival = raw.t_arrival;
            stats.success = true;
            break;
        }
        std::swap(current, other);
    }

    stats.nodes_start = start_tree.nodes.size();
    stats.nodes_goal = goal_tree.nodes.size();
    stats.wall_seconds = elapsed();
    if (!stats.success && stats.failure_reason.empty())
        stats.failure_reason = "budget exhausted";
    return result;
}

}  // namespace sirrt

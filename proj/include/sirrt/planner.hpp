#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirrt/collision.hpp"
#include "sirrt/path.hpp"
#include "sirrt/rng.hpp"
#include "sirrt/safe_interval.hpp"

namespace sirrt {

struct PlannerParams {
    double delta_planner = 1.0;  // max extension step, radians
    double delta_parent = 3.0;   // parent-search radius, radians
    double v_max = 1.0;          // L2 joint-space speed bound, rad/s
    double time_budget = 20.0;   // wall clock, seconds
    std::uint64_t rng_seed = 0;
    bool trim = true;
    long max_iterations = 0;     // 0 = no cap (wall budget governs)
};

enum class TreeDirection { start, goal };

/// Tree node. `time` is the earliest possible arrival at q for start-tree
/// nodes and the latest possible departure from q for goal-tree nodes; both
/// lie inside the node's safe interval. edge_depart/edge_arrive are the
/// absolute times of the move connecting the node with its parent (equal to
/// `time` on roots).
struct TreeNode {
    Configuration q;
    SafeInterval interval;
    double time = 0.0;
    std::int32_t parent = -1;
    double edge_depart = 0.0;
    double edge_arrive = 0.0;
};

/// Node store with a joint-space nearest-neighbor structure: linear scan
/// while small, a k-d tree (rebuilt on growth) once the node count passes
/// kKdThreshold. Ties on distance break toward the lower node index.
class Tree {
public:
    static constexpr std::size_t kKdThreshold = 2000;

    explicit Tree(TreeDirection direction, std::size_t dof);

    TreeDirection direction() const { return direction_; }
    std::size_t size() const { return nodes_.size(); }
    const TreeNode& operator[](std::size_t i) const { return nodes_[i]; }

    std::int32_t add(TreeNode node);

    /// (index, distance) of the closest configuration; tree must be non-empty.
    std::pair<std::int32_t, double> nearest(const Configuration& q) const;

    /// All nodes within `radius`, sorted by (distance, index).
    std::vector<std::pair<double, std::int32_t>> within_radius(const Configuration& q,
                                                               double radius) const;

private:
    struct KdTree;
    void maybe_rebuild_kd() const;

    TreeDirection direction_;
    std::size_t dof_;
    std::vector<TreeNode> nodes_;
    std::vector<double> coords_;  // flat dof-strided copy of node configurations
    mutable std::shared_ptr<KdTree> kd_;
    mutable std::size_t kd_built_count_ = 0;
};

struct PlanStats {
    bool success = false;
    std::string failure_reason;
    long iterations = 0;
    long interval_queries = 0;
    std::size_t nodes_start = 0;
    std::size_t nodes_goal = 0;
    double wall_seconds = 0.0;
    double index_build_seconds = 0.0;
    double t_arrival = -1.0;      // after trimming (== t_arrival_raw when trim is off)
    double t_arrival_raw = -1.0;  // before trimming
};

struct PlanResult {
    std::optional<TimedPath> path;
    PlanStats stats;
};

/// Uniform sample within the joint limits.
Configuration sample_configuration(Rng& rng, const RobotModel& model);

/// RRT extension: step from the nearest tree configuration toward q_sampled
/// by at most delta_planner; empty if the stepped configuration collides
/// with a static obstacle.
std::optional<Configuration> extend_toward(const Tree& tree, const Configuration& q_sampled,
                                           const CollisionEngine& engine,
                                           const PlannerParams& params);

/// Wait-and-go timing: the earliest tick-aligned departure >= from_time (the
/// exact from_time is also tried, so a zero wait needs no grid alignment)
/// whose move is collision-free and arrives inside to_interval.
std::optional<std::pair<double, double>> earliest_arrival(
    const CollisionEngine& engine, const Configuration& q_from, const SafeInterval& from_interval,
    double from_time, const Configuration& q_to, const SafeInterval& to_interval,
    const PlannerParams& params);

/// Mirror image: the latest departure from from_interval whose arrival at
/// q_to is <= to_time and inside to_interval.
std::optional<std::pair<double, double>> latest_arrival(
    const CollisionEngine& engine, const Configuration& q_from, const SafeInterval& from_interval,
    const Configuration& q_to, const SafeInterval& to_interval, double to_time,
    const PlannerParams& params);

/// One node per connectable safe interval of q_new; candidate parents are
/// examined in order of increasing distance within delta_parent.
std::vector<TreeNode> set_parent(const Tree& tree, const Configuration& q_new,
                                 const SafeIntervalSet& intervals, const CollisionEngine& engine,
                                 const PlannerParams& params);

struct MeetPair {
    std::int32_t start_leaf = -1;  // node in the start tree, at the meet configuration
    std::int32_t goal_leaf = -1;   // node in the goal tree, same interval
};

/// Greedily grows `other` toward q_target; on reaching it exactly, succeeds
/// iff a new other-tree node and a target node share the same safe interval
/// with start-side arrival <= goal-side departure.
std::optional<MeetPair> connect(const CollisionEngine& engine, Tree& other,
                                const Configuration& q_target,
                                const std::vector<std::int32_t>& target_nodes,
                                const Tree& current, const PlannerParams& params,
                                PlanStats& stats);

/// Concatenates the two branches into a forward-in-time path with waits
/// materialized. Requires matching meet configurations/intervals and
/// start-side arrival <= goal-side departure.
TimedPath unite_trees(const Tree& start_tree, std::int32_t start_leaf, const Tree& goal_tree,
                      std::int32_t goal_leaf);

/// Re-times the suffix after the meet point greedily-early; never increases
/// t_arrival and keeps the path valid (falls back to the input times where
/// no earlier departure is feasible).
TimedPath trim_wait(const TimedPath& path, const CollisionEngine& engine,
                    const PlannerParams& params);

/// Safe-interval RRT over the batched collision engine.
PlanResult plan(const ProblemInstance& instance, const PlannerParams& params);

/// Space-time RRT-Connect baseline: samples explicit (q, t) states and pays
/// per-tick collision checks for every wait, with no interval reasoning.
/// Same contract as plan(); exists for runtime/cost comparison.
PlanResult plan_baseline_st(const ProblemInstance& instance, const PlannerParams& params);

}  // namespace sirrt

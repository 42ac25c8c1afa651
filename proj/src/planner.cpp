#include "sirrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sirrt {

namespace {

double dist2(const double* a, const Configuration& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tree / nearest neighbors

struct Tree::KdTree {
    struct Node {
        int split_dim;
        double split_value;
        std::int32_t point = -1;  // leaf payload when >= 0
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    std::size_t dof;
    const std::vector<double>* coords;

    int build(std::vector<std::int32_t>& ids, int lo, int hi, int depth) {
        if (lo >= hi) return -1;
        if (hi - lo == 1) {
            nodes.push_back({0, 0.0, ids[lo], -1, -1});
            return static_cast<int>(nodes.size()) - 1;
        }
        const int dim = depth % static_cast<int>(dof);
        const int mid = (lo + hi) / 2;
        std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                         [&](std::int32_t a, std::int32_t b) {
                             const double va = (*coords)[a * dof + dim];
                             const double vb = (*coords)[b * dof + dim];
                             return va < vb || (va == vb && a < b);
                         });
        const int self = static_cast<int>(nodes.size());
        nodes.push_back({dim, (*coords)[ids[mid] * dof + dim], -1, -1, -1});
        const int l = build(ids, lo, mid, depth + 1);
        const int r = build(ids, mid, hi, depth + 1);
        nodes[self].left = l;
        nodes[self].right = r;
        return self;
    }

    void nearest(int node, const Configuration& q, double& best_d2, std::int32_t& best_id) const {
        if (node < 0) return;
        const Node& n = nodes[node];
        if (n.point >= 0) {
            const double d2v = dist2(coords->data() + n.point * dof, q);
            if (d2v < best_d2 || (d2v == best_d2 && n.point < best_id)) {
                best_d2 = d2v;
                best_id = n.point;
            }
            return;
        }
        const double diff = q[n.split_dim] - n.split_value;
        const int first = diff < 0.0 ? n.left : n.right;
        const int second = diff < 0.0 ? n.right : n.left;
        nearest(first, q, best_d2, best_id);
        if (diff * diff <= best_d2) nearest(second, q, best_d2, best_id);
    }

    void within(int node, const Configuration& q, double r2,
                std::vector<std::pair<double, std::int32_t>>& out) const {
        if (node < 0) return;
        const Node& n = nodes[node];
        if (n.point >= 0) {
            const double d2v = dist2(coords->data() + n.point * dof, q);
            if (d2v <= r2) out.emplace_back(d2v, n.point);
            return;
        }
        const double diff = q[n.split_dim] - n.split_value;
        const int first = diff < 0.0 ? n.left : n.right;
        const int second = diff < 0.0 ? n.right : n.left;
        within(first, q, r2, out);
        if (diff * diff <= r2) within(second, q, r2, out);
    }
};

Tree::Tree(TreeDirection direction, std::size_t dof) : direction_(direction), dof_(dof) {}

std::int32_t Tree::add(TreeNode node) {
    coords_.insert(coords_.end(), node.q.begin(), node.q.end());
    nodes_.push_back(std::move(node));
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

void Tree::maybe_rebuild_kd() const {
    if (nodes_.size() < kKdThreshold) return;
    if (kd_ && nodes_.size() < 2 * kd_built_count_) return;
    auto kd = std::make_shared<KdTree>();
    kd->dof = dof_;
    kd->coords = &coords_;
    std::vector<std::int32_t> ids(nodes_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int32_t>(i);
    kd->nodes.reserve(2 * ids.size());
    kd->build(ids, 0, static_cast<int>(ids.size()), 0);
    kd_ = std::move(kd);
    kd_built_count_ = nodes_.size();
}

std::pair<std::int32_t, double> Tree::nearest(const Configuration& q) const {
    maybe_rebuild_kd();
    double best_d2 = std::numeric_limits<double>::infinity();
    std::int32_t best_id = -1;
    std::size_t tail_begin = 0;
    if (kd_) {
        kd_->nearest(0, q, best_d2, best_id);
        tail_begin = kd_built_count_;
    }
    for (std::size_t i = tail_begin; i < nodes_.size(); ++i) {
        const double d2v = dist2(coords_.data() + i * dof_, q);
        const auto id = static_cast<std::int32_t>(i);
        if (d2v < best_d2 || (d2v == best_d2 && id < best_id)) {
            best_d2 = d2v;
            best_id = id;
        }
    }
    return {best_id, std::sqrt(best_d2)};
}

std::vector<std::pair<double, std::int32_t>> Tree::within_radius(const Configuration& q,
                                                                 double radius) const {
    maybe_rebuild_kd();
    const double r2 = radius * radius;
    std::vector<std::pair<double, std::int32_t>> out;
    std::size_t tail_begin = 0;
    if (kd_) {
        kd_->within(0, q, r2, out);
        tail_begin = kd_built_count_;
    }
    for (std::size_t i = tail_begin; i < nodes_.size(); ++i) {
        const double d2v = dist2(coords_.data() + i * dof_, q);
        if (d2v <= r2) out.emplace_back(d2v, static_cast<std::int32_t>(i));
    }
    std::sort(out.begin(), out.end());
    for (auto& [d, id] : out) d = std::sqrt(d);
    return out;
}

// ---------------------------------------------------------------------------
// Primitive operations

Configuration sample_configuration(Rng& rng, const RobotModel& model) {
    Configuration q(model.dof());
    for (std::size_t i = 0; i < model.dof(); ++i)
        q[i] = rng.uniform(model.joints[i].lo, model.joints[i].hi);
    return q;
}

std::optional<Configuration> extend_toward(const Tree& tree, const Configuration& q_sampled,
                                           const CollisionEngine& engine,
                                           const PlannerParams& params) {
    const auto [near_id, dist] = tree.nearest(q_sampled);
    const Configuration& q_near = tree[static_cast<std::size_t>(near_id)].q;

    Configuration q_new;
    if (dist <= params.delta_planner) {
        q_new = q_sampled;
    } else {
        q_new.resize(q_near.size());
        const double s = params.delta_planner / dist;
        for (std::size_t i = 0; i < q_new.size(); ++i)
            q_new[i] = q_near[i] + s * (q_sampled[i] - q_near[i]);
        const auto& joints = engine.scene().robot.joints;
        for (std::size_t i = 0; i < q_new.size(); ++i)
            q_new[i] = std::clamp(q_new[i], joints[i].lo, joints[i].hi);
    }

    std::vector<Capsule> links;
    forward_kinematics_unchecked(engine.scene().robot, q_new, links);
    if (engine.statics_collide(links)) return std::nullopt;
    return q_new;
}

std::optional<std::pair<double, double>> earliest_arrival(
    const CollisionEngine& engine, const Configuration& q_from, const SafeInterval& from_interval,
    double from_time, const Configuration& q_to, const SafeInterval& to_interval,
    const PlannerParams& params) {
    const TimeGrid& grid = engine.grid();
    const double duration = configuration_distance(q_from, q_to) / params.v_max;

    const auto try_depart = [&](double depart) -> std::optional<std::pair<double, double>> {
        const double arrive = depart + duration;
        if (arrive > to_interval.t_u) return std::nullopt;  // signals scan exhaustion
        if (arrive >= to_interval.t_l &&
            !engine.motion_collides(q_from, q_to, depart, arrive))
            return std::make_pair(depart, arrive);
        return std::nullopt;
    };

    if (from_time >= from_interval.t_l && from_time <= from_interval.t_u) {
        if (from_time + duration > to_interval.t_u) return std::nullopt;
        if (auto r = try_depart(from_time)) return r;
    }
    for (int k = grid.tick_ceil(from_time); k < grid.tick_count; ++k) {
        const double depart = grid.tick_time(k);
        if (depart <= from_time) continue;
        if (depart > from_interval.t_u) break;
        if (depart + duration > to_interval.t_u) break;
        if (auto r = try_depart(depart)) return r;
    }
    return std::nullopt;
}

std::optional<std::pair<double, double>> latest_arrival(
    const CollisionEngine& engine, const Configuration& q_from, const SafeInterval& from_interval,
    const Configuration& q_to, const SafeInterval& to_interval, double to_time,
    const PlannerParams& params) {
    const TimeGrid& grid = engine.grid();
    const double duration = configuration_distance(q_from, q_to) / params.v_max;

    const double depart_hi = std::min(from_interval.t_u, to_time - duration);
    if (depart_hi < from_interval.t_l) return std::nullopt;

    const auto feasible = [&](double depart) -> bool {
        const double arrive = depart + duration;
        return arrive >= to_interval.t_l && arrive <= to_interval.t_u &&
               !engine.motion_collides(q_from, q_to, depart, arrive);
    };

    if (depart_hi + duration >= to_interval.t_l && feasible(depart_hi))
        return std::make_pair(depart_hi, depart_hi + duration);
    for (int k = grid.tick_floor(depart_hi); k >= 0; --k) {
        const double depart = grid.tick_time(k);
        if (depart >= depart_hi) continue;
        if (depart < from_interval.t_l) break;
        if (depart + duration < to_interval.t_l) break;
        if (feasible(depart)) return std::make_pair(depart, depart + duration);
    }
    return std::nullopt;
}

std::vector<TreeNode> set_parent(const Tree& tree, const Configuration& q_new,
                                 const SafeIntervalSet& intervals, const CollisionEngine& engine,
                                 const PlannerParams& params) {
    std::vector<TreeNode> out;
    if (intervals.empty()) return out;
    const auto candidates = tree.within_radius(q_new, params.delta_parent);
    for (const SafeInterval& si : intervals) {
        for (const auto& [dist, id] : candidates) {
            const TreeNode& cand = tree[static_cast<std::size_t>(id)];
            if (tree.direction() == TreeDirection::start) {
                const auto ea =
                    earliest_arrival(engine, cand.q, cand.interval, cand.time, q_new, si, params);
                if (ea) {
                    out.push_back(TreeNode{q_new, si, ea->second, id, ea->first, ea->second});
                    break;
                }
            } else {
                const auto la =
                    latest_arrival(engine, q_new, si, cand.q, cand.interval, cand.time, params);
                if (la) {
                    out.push_back(TreeNode{q_new, si, la->first, id, la->first, la->second});
                    break;
                }
            }
        }
    }
    return out;
}

namespace {

bool same_config(const Configuration& a, const Configuration& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::optional<MeetPair> connect(const CollisionEngine& engine, Tree& other,
                                const Configuration& q_target,
                                const std::vector<std::int32_t>& target_nodes,
                                const Tree& current, const PlannerParams& params,
                                PlanStats& stats) {
    const double initial_dist = other.nearest(q_target).second;
    const int max_steps = static_cast<int>(initial_dist / params.delta_planner) + 2;

    for (int step = 0; step < max_steps; ++step) {
        const auto q_new = extend_toward(other, q_target, engine, params);
        if (!q_new) return std::nullopt;

        const SafeIntervalSet intervals = engine.compute_safe_intervals(*q_new);
        ++stats.interval_queries;
        const std::vector<TreeNode> nodes = set_parent(other, *q_new, intervals, engine, params);
        if (nodes.empty()) return std::nullopt;

        std::vector<std::int32_t> added;
        added.reserve(nodes.size());
        for (const TreeNode& n : nodes) added.push_back(other.add(n));

        if (same_config(*q_new, q_target)) {
            for (const std::int32_t ob : added) {
                for (const std::int32_t tb : target_nodes) {
                    const TreeNode& o = other[static_cast<std::size_t>(ob)];
                    const TreeNode& t = current[static_cast<std::size_t>(tb)];
                    if (!(o.interval == t.interval)) continue;
                    const bool current_is_start = current.direction() == TreeDirection::start;
                    const double arrival = current_is_start ? t.time : o.time;
                    const double departure = current_is_start ? o.time : t.time;
                    if (arrival <= departure) {
                        MeetPair meet;
                        meet.start_leaf = current_is_start ? tb : ob;
                        meet.goal_leaf = current_is_start ? ob : tb;
                        return meet;
                    }
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

TimedPath unite_trees(const Tree& start_tree, std::int32_t start_leaf, const Tree& goal_tree,
                      std::int32_t goal_leaf) {
    const TreeNode& s = start_tree[static_cast<std::size_t>(start_leaf)];
    const TreeNode& g = goal_tree[static_cast<std::size_t>(goal_leaf)];
    if (!same_config(s.q, g.q) || !(s.interval == g.interval) || s.time > g.time)
        throw std::logic_error("unite_trees: incompatible meet nodes");

    // start branch, root first
    std::vector<std::int32_t> chain;
    for (std::int32_t i = start_leaf; i >= 0; i = start_tree[static_cast<std::size_t>(i)].parent)
        chain.push_back(i);
    std::reverse(chain.begin(), chain.end());

    TimedPath path;
    for (const std::int32_t i : chain) {
        const TreeNode& n = start_tree[static_cast<std::size_t>(i)];
        path.segments.push_back(PathSegment{n.q, n.time, n.time, n.time});
    }
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const TreeNode& child = start_tree[static_cast<std::size_t>(chain[i])];
        path.segments[i - 1].depart = child.edge_depart;
        path.segments[i - 1].wait_until = child.edge_depart;
    }
    path.meet_index = static_cast<int>(path.segments.size()) - 1;

    // goal branch, reversed so all actions go forward in time
    std::int32_t cur = goal_leaf;
    while (goal_tree[static_cast<std::size_t>(cur)].parent >= 0) {
        const TreeNode& c = goal_tree[static_cast<std::size_t>(cur)];
        path.segments.back().depart = c.edge_depart;
        path.segments.back().wait_until = c.edge_depart;
        const std::int32_t parent = c.parent;
        const TreeNode& p = goal_tree[static_cast<std::size_t>(parent)];
        path.segments.push_back(PathSegment{p.q, c.edge_arrive, c.edge_arrive, c.edge_arrive});
        cur = parent;
    }

    path.t_arrival = path.segments.back().arrive;
    return path;
}

TimedPath trim_wait(const TimedPath& path, const CollisionEngine& engine,
                    const PlannerParams& params) {
    if (path.segments.size() < 2) return path;
    const int last = static_cast<int>(path.segments.size()) - 1;
    if (path.meet_index >= last) return path;

    // Safe intervals along the suffix, selected as the interval containing
    // each waypoint's original occupied span.
    const auto interval_of = [&](const PathSegment& seg) -> std::optional<SafeInterval> {
        const SafeIntervalSet set = engine.compute_safe_intervals(seg.q);
        for (const SafeInterval& si : set)
            if (si.t_l <= seg.arrive && seg.depart <= si.t_u) return si;
        return std::nullopt;
    };

    TimedPath out = path;
    std::optional<SafeInterval> from_iv = interval_of(path.segments[path.meet_index]);
    if (!from_iv) return path;

    for (int i = path.meet_index; i < last; ++i) {
        const PathSegment& orig_from = path.segments[static_cast<std::size_t>(i)];
        const PathSegment& orig_to = path.segments[static_cast<std::size_t>(i + 1)];
        const std::optional<SafeInterval> to_iv = interval_of(orig_to);
        if (!to_iv) return path;

        PathSegment& seg = out.segments[static_cast<std::size_t>(i)];
        PathSegment& nxt = out.segments[static_cast<std::size_t>(i + 1)];
        const auto ea =
            earliest_arrival(engine, seg.q, *from_iv, seg.arrive, nxt.q, *to_iv, params);
        if (ea && ea->second <= orig_to.arrive) {
            seg.depart = ea->first;
            seg.wait_until = ea->first;
            nxt.arrive = ea->second;
        } else {
            // no earlier departure exists; keep the original edge timing
            seg.depart = orig_from.depart;
            seg.wait_until = orig_from.depart;
            nxt.arrive = orig_to.arrive;
        }
        from_iv = to_iv;
    }
    PathSegment& final_seg = out.segments.back();
    final_seg.depart = final_seg.arrive;
    final_seg.wait_until = final_seg.arrive;
    out.t_arrival = final_seg.arrive;
    return out;
}

// ---------------------------------------------------------------------------
// Main loop

namespace {

TimedPath trivial_path(const Configuration& q) {
    TimedPath p;
    p.segments.push_back(PathSegment{q, 0.0, 0.0, 0.0});
    p.t_arrival = 0.0;
    p.meet_index = 0;
    return p;
}

}  // namespace

PlanResult plan(const ProblemInstance& instance, const PlannerParams& params) {
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
    const TimeGrid& grid = instance.scene.grid;
    const double horizon = grid.end_time();

    const SafeIntervalSet start_set = engine.compute_safe_intervals(instance.q_start);
    ++stats.interval_queries;
    if (start_set.empty() || start_set.front().tick_lo != 0) {
        stats.failure_reason = "start configuration has no safe interval beginning at t=0";
        stats.wall_seconds = elapsed();
        return result;
    }
    const SafeIntervalSet goal_set = engine.compute_safe_intervals(instance.q_goal);
    ++stats.interval_queries;
    if (goal_set.empty() || goal_set.back().tick_hi != grid.tick_count - 1) {
        stats.failure_reason = "goal configuration has no safe interval containing t_max";
        stats.wall_seconds = elapsed();
        return result;
    }

    if (same_config(instance.q_start, instance.q_goal)) {
        result.path = trivial_path(instance.q_start);
        stats.success = true;
        stats.t_arrival = stats.t_arrival_raw = 0.0;
        stats.nodes_start = stats.nodes_goal = 1;
        stats.wall_seconds = elapsed();
        return result;
    }

    Tree start_tree(TreeDirection::start, robot.dof());
    Tree goal_tree(TreeDirection::goal, robot.dof());
    start_tree.add(TreeNode{instance.q_start, start_set.front(), 0.0, -1, 0.0, 0.0});
    goal_tree.add(TreeNode{instance.q_goal, goal_set.back(), horizon, -1, horizon, horizon});

    Tree* current = &start_tree;
    Tree* other = &goal_tree;
    Rng rng(mix_seed(params.rng_seed, 0x51287ULL));

    while (elapsed() < params.time_budget &&
           (params.max_iterations == 0 || stats.iterations < params.max_iterations)) {
        ++stats.iterations;

        const Configuration q_sampled = sample_configuration(rng, robot);
        const auto q_new = extend_toward(*current, q_sampled, engine, params);
        if (!q_new) {
            std::swap(current, other);
            continue;
        }

        const SafeIntervalSet intervals = engine.compute_safe_intervals(*q_new);
        ++stats.interval_queries;
        const std::vector<TreeNode> nodes = set_parent(*current, *q_new, intervals, engine, params);
        if (nodes.empty()) {
            std::swap(current, other);
            continue;
        }
        std::vector<std::int32_t> added;
        added.reserve(nodes.size());
        for (const TreeNode& n : nodes) added.push_back(current->add(n));

        const auto meet = connect(engine, *other, *q_new, added, *current, params, stats);
        if (meet) {
            const TimedPath raw =
                unite_trees(start_tree, meet->start_leaf, goal_tree, meet->goal_leaf);
            stats.t_arrival_raw = raw.t_arrival;
            result.path = params.trim ? trim_wait(raw, engine, params) : raw;
            stats.t_arrival = result.path->t_arrival;
            stats.success = true;
            break;
        }
        std::swap(current, other);
    }

    stats.nodes_start = start_tree.size();
    stats.nodes_goal = goal_tree.size();
    stats.wall_seconds = elapsed();
    if (!stats.success && stats.failure_reason.empty())
        stats.failure_reason = "budget exhausted";
    return result;
}

}  // namespace sirrt

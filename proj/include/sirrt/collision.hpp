#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "sirrt/safe_interval.hpp"
#include "sirrt/scene.hpp"

namespace sirrt {

/// Two-phase timed collision engine. Construction places every moving
/// obstacle at every tick on a single scene (K x tick_count sphere bodies)
/// and indexes their bounding boxes in a uniform hash grid, so the safe
/// intervals of a configuration cost one broad-phase pass instead of one
/// per tick. Queries are read-only and reentrant; one engine may serve any
/// number of concurrent planner runs.
class CollisionEngine {
public:
    explicit CollisionEngine(const Scene& scene);

    const Scene& scene() const { return *scene_; }
    const TimeGrid& grid() const { return scene_->grid; }

    std::size_t body_count() const { return body_x_.size(); }
    int body_obstacle(std::size_t body) const { return static_cast<int>(body % k_); }
    int body_tick(std::size_t body) const { return static_cast<int>(body / k_); }
    Sphere body_sphere(std::size_t body) const {
        return {{body_x_[body], body_y_[body], body_z_[body]}, body_r_[body]};
    }
    double index_build_seconds() const { return build_seconds_; }

    /// Broad phase: ids of every timed body whose box overlaps any of the
    /// given boxes. Sorted, deduplicated; a superset of the true colliders.
    std::vector<std::uint32_t> broad_candidates(std::span<const Aabb> robot_boxes) const;

    bool statics_collide(const std::vector<Capsule>& links) const;

    /// True iff any link capsule intersects any static obstacle or any
    /// dynamic obstacle positioned at time t.
    bool config_collides(const Configuration& q, double t) const;

    /// Maximal runs of collision-free ticks for the robot held at q.
    /// Identical to the per-tick naive oracle; empty if q collides with a
    /// static obstacle.
    SafeIntervalSet compute_safe_intervals(const Configuration& q) const;

    /// Samples the linearly interpolated configuration at every grid tick
    /// strictly inside [t_depart, t_arrive] plus both endpoints.
    bool motion_collides(const Configuration& q_from, const Configuration& q_to, double t_depart,
                         double t_arrive) const;

private:
    bool links_collide_at(const std::vector<Capsule>& links, double t) const;
    void cell_range(const Aabb& box, int lo[3], int hi[3]) const;

    const Scene* scene_;
    std::size_t k_ = 0;  // obstacle count

    // timed bodies, tick-major: body id = tick * K + obstacle
    std::vector<double> body_x_, body_y_, body_z_, body_r_;

    // uniform hash grid over body boxes (CSR per cell)
    double cell_size_ = 0.3;
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;
    std::vector<std::uint32_t> cell_entries_;

    double max_link_radius_ = 0.0;
    double build_seconds_ = 0.0;
};

}  // namespace sirrt

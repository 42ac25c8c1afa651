#include "sirrt/collision.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sirrt/kernels.hpp"

namespace sirrt {

namespace {

// Body boxes are padded by a hair so that tangency contacts whose radius-sum
// rounds up can never fall outside the box test; candidate sets stay sound
// under floating-point rounding and the narrow phase stays exact.
constexpr double kBroadPhasePad = 1e-9;

inline std::uint64_t pack_cell(int cx, int cy, int cz) {
    constexpr std::int64_t bias = 1 << 20;
    constexpr std::uint64_t mask = (1u << 21) - 1;
    return ((static_cast<std::uint64_t>(cx + bias) & mask) << 42) |
           ((static_cast<std::uint64_t>(cy + bias) & mask) << 21) |
           (static_cast<std::uint64_t>(cz + bias) & mask);
}

struct Scratch {
    std::vector<double> x, y, z;
    std::vector<std::uint8_t> hit;
    std::vector<std::uint32_t> cand;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

}  // namespace

CollisionEngine::CollisionEngine(const Scene& scene) : scene_(&scene) {
    const auto t0 = std::chrono::steady_clock::now();
    const TimeGrid& grid = scene.grid;
    k_ = scene.dynamics.size();

    for (const Capsule& c : scene.robot.link_capsules)
        max_link_radius_ = std::max(max_link_radius_, c.radius);

    double max_obstacle_radius = 0.0;
    for (const DynamicObstacle& o : scene.dynamics)
        max_obstacle_radius = std::max(max_obstacle_radius, o.radius);
    if (k_ > 0) cell_size_ = 2.0 * (max_obstacle_radius + max_link_radius_);
    if (!(cell_size_ > 0.0)) cell_size_ = 0.3;

    const std::size_t n = k_ * static_cast<std::size_t>(grid.tick_count);
    body_x_.resize(n);
    body_y_.resize(n);
    body_z_.resize(n);
    body_r_.resize(n);
    for (int k = 0; k < grid.tick_count; ++k) {
        const double t = grid.tick_time(k);
        for (std::size_t i = 0; i < k_; ++i) {
            const std::size_t body = static_cast<std::size_t>(k) * k_ + i;
            const Vec3 p = position_at(scene.dynamics[i], t);
            body_x_[body] = p.x;
            body_y_[body] = p.y;
            body_z_[body] = p.z;
            body_r_[body] = scene.dynamics[i].radius;
        }
    }

    // two-pass CSR build: count entries per cell, then fill
    std::unordered_map<std::uint64_t, std::uint32_t> counts;
    counts.reserve(n * 2);
    int lo[3], hi[3];
    for (std::size_t body = 0; body < n; ++body) {
        cell_range(aabb_of(body_sphere(body), kBroadPhasePad), lo, hi);
        for (int cx = lo[0]; cx <= hi[0]; ++cx)
            for (int cy = lo[1]; cy <= hi[1]; ++cy)
                for (int cz = lo[2]; cz <= hi[2]; ++cz) ++counts[pack_cell(cx, cy, cz)];
    }
    std::uint32_t offset = 0;
    cells_.reserve(counts.size() * 2);
    for (const auto& [key, count] : counts) {
        cells_.emplace(key, std::make_pair(offset, offset));
        offset += count;
    }
    cell_entries_.resize(offset);
    for (std::size_t body = 0; body < n; ++body) {
        cell_range(aabb_of(body_sphere(body), kBroadPhasePad), lo, hi);
        for (int cx = lo[0]; cx <= hi[0]; ++cx)
            for (int cy = lo[1]; cy <= hi[1]; ++cy)
                for (int cz = lo[2]; cz <= hi[2]; ++cz) {
                    auto& span = cells_[pack_cell(cx, cy, cz)];
                    cell_entries_[span.second++] = static_cast<std::uint32_t>(body);
                }
    }
    build_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void CollisionEngine::cell_range(const Aabb& box, int lo[3], int hi[3]) const {
    lo[0] = static_cast<int>(std::floor(box.min.x / cell_size_));
    lo[1] = static_cast<int>(std::floor(box.min.y / cell_size_));
    lo[2] = static_cast<int>(std::floor(box.min.z / cell_size_));
    hi[0] = static_cast<int>(std::floor(box.max.x / cell_size_));
    hi[1] = static_cast<int>(std::floor(box.max.y / cell_size_));
    hi[2] = static_cast<int>(std::floor(box.max.z / cell_size_));
}

std::vector<std::uint32_t> CollisionEngine::broad_candidates(
    std::span<const Aabb> robot_boxes) const {
    std::vector<std::uint32_t> out;
    if (body_x_.empty()) return out;
    int lo[3], hi[3];
    for (const Aabb& box : robot_boxes) {
        cell_range(box, lo, hi);
        for (int cx = lo[0]; cx <= hi[0]; ++cx)
            for (int cy = lo[1]; cy <= hi[1]; ++cy)
                for (int cz = lo[2]; cz <= hi[2]; ++cz) {
                    const auto it = cells_.find(pack_cell(cx, cy, cz));
                    if (it == cells_.end()) continue;
                    for (std::uint32_t e = it->second.first; e < it->second.second; ++e) {
                        const std::uint32_t body = cell_entries_[e];
                        if (box.overlaps(aabb_of(body_sphere(body), kBroadPhasePad))) out.push_back(body);
                    }
                }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool CollisionEngine::statics_collide(const std::vector<Capsule>& links) const {
    for (const StaticObstacle& s : scene_->statics) {
        for (const Capsule& c : links) {
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

bool CollisionEngine::links_collide_at(const std::vector<Capsule>& links, double t) const {
    if (statics_collide(links)) return true;
    if (k_ == 0) return false;

    const TimeGrid& grid = scene_->grid;
    const double* px;
    const double* py;
    const double* pz;
    const double* pr;
    const long k = std::lround(t * grid.frequency);
    if (k >= 0 && k < grid.tick_count && grid.tick_time(static_cast<int>(k)) == t) {
        const std::size_t base = static_cast<std::size_t>(k) * k_;
        px = body_x_.data() + base;
        py = body_y_.data() + base;
        pz = body_z_.data() + base;
        pr = body_r_.data() + base;
    } else {
        Scratch& s = scratch();
        s.x.resize(k_);
        s.y.resize(k_);
        s.z.resize(k_);
        for (std::size_t i = 0; i < k_; ++i) {
            const Vec3 p = position_at(scene_->dynamics[i], t);
            s.x[i] = p.x;
            s.y[i] = p.y;
            s.z[i] = p.z;
        }
        px = s.x.data();
        py = s.y.data();
        pz = s.z.data();
        pr = body_r_.data();  // tick 0 slice carries the per-obstacle radii
    }

    Scratch& s = scratch();
    s.hit.resize(k_);
    for (const Capsule& link : links) {
        kernels::capsule_spheres_collide_batch(link, px, py, pz, pr, k_, s.hit.data());
        for (std::size_t i = 0; i < k_; ++i)
            if (s.hit[i]) return true;
    }
    return false;
}

bool CollisionEngine::config_collides(const Configuration& q, double t) const {
    const std::vector<Capsule> links = forward_kinematics(scene_->robot, q);
    return links_collide_at(links, t);
}

SafeIntervalSet CollisionEngine::compute_safe_intervals(const Configuration& q) const {
    const TimeGrid& grid = scene_->grid;
    const std::vector<Capsule> links = forward_kinematics(scene_->robot, q);
    if (statics_collide(links)) return {};

    std::vector<char> colliding(static_cast<std::size_t>(grid.tick_count), 0);
    if (k_ > 0) {
        std::vector<Aabb> boxes;
        boxes.reserve(links.size());
        for (const Capsule& c : links) boxes.push_back(aabb_of(c, 0.0));
        const std::vector<std::uint32_t> cand = broad_candidates(boxes);

        Scratch& s = scratch();
        const std::size_t n = cand.size();
        s.x.resize(n);
        s.y.resize(n);
        s.z.resize(n);
        std::vector<double> radii(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.x[i] = body_x_[cand[i]];
            s.y[i] = body_y_[cand[i]];
            s.z[i] = body_z_[cand[i]];
            radii[i] = body_r_[cand[i]];
        }
        s.hit.resize(n);
        for (const Capsule& link : links) {
            kernels::capsule_spheres_collide_batch(link, s.x.data(), s.y.data(), s.z.data(),
                                                   radii.data(), n, s.hit.data());
            for (std::size_t i = 0; i < n; ++i)
                if (s.hit[i]) colliding[static_cast<std::size_t>(body_tick(cand[i]))] = 1;
        }
    }
    return intervals_from_collision_ticks(colliding, grid);
}

bool CollisionEngine::motion_collides(const Configuration& q_from, const Configuration& q_to,
                                      double t_depart, double t_arrive) const {
    const TimeGrid& grid = scene_->grid;
    const double duration = t_arrive - t_depart;

    std::vector<Capsule> links;
    const auto sample = [&](double t) {
        Configuration q(q_from.size());
        const double s = duration > 0.0 ? (t - t_depart) / duration : 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = q_from[i] + s * (q_to[i] - q_from[i]);
        forward_kinematics_unchecked(scene_->robot, q, links);
        return links_collide_at(links, t);
    };

    if (sample(t_depart)) return true;
    for (int k = grid.tick_ceil(t_depart); k < grid.tick_count; ++k) {
        const double t = grid.tick_time(k);
        if (t <= t_depart) continue;
        if (t >= t_arrive) break;
        if (sample(t)) return true;
    }
    if (duration > 0.0 && sample(t_arrive)) return true;
    return false;
}

}  // namespace sirrt

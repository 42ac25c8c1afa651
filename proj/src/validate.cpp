#include "sirrt/validate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sirrt {

const char* violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::collision: return "collision";
        case ViolationKind::continuity: return "continuity";
        case ViolationKind::speed: return "speed";
        case ViolationKind::limits: return "limits";
        case ViolationKind::interval: return "interval";
    }
    return "?";
}

bool naive_config_collides(const Scene& scene, const Configuration& q, double t) {
    std::vector<Capsule> links;
    forward_kinematics_unchecked(scene.robot, q, links);
    for (const StaticObstacle& s : scene.statics) {
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
    for (const DynamicObstacle& o : scene.dynamics) {
        const Sphere s{position_at(o, t), o.radius};
        for (const Capsule& c : links) {
            if (capsule_sphere_collides(c, s)) return true;
        }
    }
    return false;
}

SafeIntervalSet naive_safe_intervals(const Scene& scene, const Configuration& q) {
    std::vector<char> colliding(static_cast<std::size_t>(scene.grid.tick_count), 0);
    for (int k = 0; k < scene.grid.tick_count; ++k)
        colliding[static_cast<std::size_t>(k)] =
            naive_config_collides(scene, q, scene.grid.tick_time(k)) ? 1 : 0;
    return intervals_from_collision_ticks(colliding, scene.grid);
}

Configuration path_state_at(const TimedPath& path, double t) {
    const auto& segs = path.segments;
    if (segs.empty()) throw std::invalid_argument("path_state_at: empty path");
    if (t <= segs.front().arrive) return segs.front().q;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        if (t <= segs[i].depart) return segs[i].q;
        if (t <= segs[i + 1].arrive) {
            const double dur = segs[i + 1].arrive - segs[i].depart;
            const double s = dur > 0.0 ? (t - segs[i].depart) / dur : 1.0;
            Configuration q(segs[i].q.size());
            for (std::size_t j = 0; j < q.size(); ++j)
                q[j] = segs[i].q[j] + s * (segs[i + 1].q[j] - segs[i].q[j]);
            return q;
        }
    }
    return segs.back().q;
}

namespace {

bool configs_equal(const Configuration& a, const Configuration& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

ValidationReport validate_path(const TimedPath& path, const ProblemInstance& instance,
                               double frequency, const ValidateParams& params) {
    const Scene& scene = instance.scene;
    const auto& segs = path.segments;
    if (segs.empty()) throw std::invalid_argument("validate_path: path has no segments");
    for (const PathSegment& s : segs) {
        if (s.q.size() != scene.robot.dof())
            throw std::invalid_argument("validate_path: waypoint dimension mismatch");
    }
    if (!(frequency > 0.0)) throw std::invalid_argument("validate_path: frequency must be > 0");

    ValidationReport report;
    const auto violate = [&](double t, ViolationKind kind, std::string detail) {
        report.valid = false;
        report.violations.push_back({t, kind, std::move(detail)});
    };

    // structure: endpoints, monotone timestamps, waits, durations, limits
    if (!configs_equal(segs.front().q, instance.q_start))
        violate(0.0, ViolationKind::continuity, "path does not start at q_start");
    if (!configs_equal(segs.back().q, instance.q_goal))
        violate(path.t_arrival, ViolationKind::continuity, "path does not end at q_goal");
    if (segs.front().arrive != 0.0)
        violate(segs.front().arrive, ViolationKind::continuity, "first waypoint not at time 0");
    if (segs.back().arrive != path.t_arrival)
        violate(path.t_arrival, ViolationKind::continuity,
                "t_arrival does not match final waypoint");
    if (path.t_arrival > scene.grid.t_max)
        violate(path.t_arrival, ViolationKind::interval, "t_arrival exceeds t_max");

    for (std::size_t i = 0; i < segs.size(); ++i) {
        const PathSegment& s = segs[i];
        if (s.depart < s.arrive)
            violate(s.arrive, ViolationKind::continuity, "departure precedes arrival");
        if (s.wait_until != s.depart)
            violate(s.arrive, ViolationKind::continuity, "wait_until does not match depart");
        for (std::size_t j = 0; j < s.q.size(); ++j) {
            if (s.q[j] < scene.robot.joints[j].lo || s.q[j] > scene.robot.joints[j].hi) {
                violate(s.arrive, ViolationKind::limits,
                        "joint " + std::to_string(j) + " outside limits");
                break;
            }
        }
        if (i + 1 < segs.size()) {
            const PathSegment& nxt = segs[i + 1];
            const double dist = configuration_distance(s.q, nxt.q);
            const double dur = nxt.arrive - s.depart;
            if (dur < 0.0) {
                violate(s.depart, ViolationKind::continuity, "non-monotone timestamps");
                continue;
            }
            if (dist > params.step_bound + 1e-12)
                violate(s.depart, ViolationKind::continuity,
                        "segment length " + std::to_string(dist) + " exceeds step bound");
            if (dist > 0.0) {
                if (dur <= 0.0) {
                    violate(s.depart, ViolationKind::speed, "instantaneous move");
                } else if (dist / dur > params.v_max + params.speed_epsilon) {
                    violate(s.depart, ViolationKind::speed,
                            "speed " + std::to_string(dist / dur) + " exceeds v_max");
                }
            }
        }
    }

    // dense collision sweep over [0, t_arrival]
    if (report.valid) {
        const int samples = static_cast<int>(std::floor(path.t_arrival * frequency)) + 1;
        for (int k = 0; k < samples; ++k) {
            const double t = static_cast<double>(k) / frequency;
            if (naive_config_collides(scene, path_state_at(path, t), t))
                violate(t, ViolationKind::collision, "robot intersects an obstacle");
            ++report.checked_samples;
        }
        if (path.t_arrival > static_cast<double>(samples - 1) / frequency) {
            if (naive_config_collides(scene, segs.back().q, path.t_arrival))
                violate(path.t_arrival, ViolationKind::collision,
                        "robot intersects an obstacle at arrival");
            ++report.checked_samples;
        }
    }

    return report;
}

}  // namespace sirrt

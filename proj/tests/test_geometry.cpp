#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sirrt/geometry.hpp"
#include "sirrt/rng.hpp"
#include "sirrt/robot.hpp"

using namespace sirrt;

namespace {

Vec3 random_point(Rng& rng, double scale = 2.0) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

// Independent oracle: iterated grid refinement of the distance between two
// parametrized segments. Five rounds of a 100x100 grid shrink the parameter
// step to ~1e-8; the distance is quadratic around its minimum, so the value
// error is far below 1e-9.
double segseg_grid_oracle(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const auto point_at = [](const Vec3& p, const Vec3& q, double t) { return p + (q - p) * t; };
    double s_lo = 0.0, s_hi = 1.0, t_lo = 0.0, t_hi = 1.0;
    double best_s = 0.0, best_t = 0.0;
    for (int round = 0; round < 5; ++round) {
        double best = std::numeric_limits<double>::infinity();
        constexpr int n = 100;
        for (int i = 0; i <= n; ++i) {
            const double s = s_lo + (s_hi - s_lo) * i / n;
            const Vec3 pa = point_at(a0, a1, s);
            for (int j = 0; j <= n; ++j) {
                const double t = t_lo + (t_hi - t_lo) * j / n;
                const double d2 = (pa - point_at(b0, b1, t)).squared_norm();
                if (d2 < best) {
                    best = d2;
                    best_s = s;
                    best_t = t;
                }
            }
        }
        const double s_w = (s_hi - s_lo) * 2.0 / n;
        const double t_w = (t_hi - t_lo) * 2.0 / n;
        s_lo = std::max(0.0, best_s - s_w);
        s_hi = std::min(1.0, best_s + s_w);
        t_lo = std::max(0.0, best_t - t_w);
        t_hi = std::min(1.0, best_t + t_w);
    }
    const Vec3 pa = point_at(a0, a1, best_s);
    const Vec3 pb = point_at(b0, b1, best_t);
    return (pa - pb).norm();
}

// Independent FK oracle: homogeneous 4x4 matrix chain.
struct Mat4 {
    double m[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

    static Mat4 from_rotation(const Mat3& r, const Vec3& t) {
        Mat4 out;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.m[4 * i + j] = r.m[3 * i + j];
        out.m[3] = t.x;
        out.m[7] = t.y;
        out.m[11] = t.z;
        return out;
    }
    Mat4 operator*(const Mat4& o) const {
        Mat4 out;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += m[4 * i + k] * o.m[4 * k + j];
                out.m[4 * i + j] = s;
            }
        return out;
    }
    Vec3 apply(const Vec3& p) const {
        return {m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3],
                m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7],
                m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11]};
    }
};

std::vector<Capsule> fk_matrix_oracle(const RobotModel& model, const Configuration& q) {
    std::vector<Capsule> out;
    Mat4 frame = Mat4::from_rotation(model.base_pose.rot, model.base_pose.pos);
    for (std::size_t i = 0; i < model.joints.size(); ++i) {
        const Mat4 rotated =
            frame * Mat4::from_rotation(Mat3::axis_angle(model.joints[i].axis, q[i]), {0, 0, 0});
        const Capsule& local = model.link_capsules[i];
        out.push_back(
            Capsule{rotated.apply(local.a), rotated.apply(local.b), local.radius});
        frame = rotated * Mat4::from_rotation(Mat3::identity(), model.joints[i].translation);
    }
    return out;
}

}  // namespace

TEST_CASE("forward kinematics: zero configuration stacks links in rest pose") {
    RobotModel m;
    m.joints = {{{0, 0, 1}, {0, 0, 0.5}}, {{0, 0, 1}, {0, 0, 0.5}}};
    m.link_capsules = {{{0, 0, 0}, {0, 0, 0.5}, 0.1}, {{0, 0, 0}, {0, 0, 0.5}, 0.1}};
    const auto caps = forward_kinematics(m, {0.0, 0.0});
    CHECK(caps[0].a == Vec3{0, 0, 0});
    CHECK(caps[0].b == Vec3{0, 0, 0.5});
    CHECK(caps[1].a == Vec3{0, 0, 0.5});
    CHECK(caps[1].b == Vec3{0, 0, 1.0});
}

TEST_CASE("forward kinematics: quarter turn about z") {
    RobotModel m;
    m.joints = {{{0, 0, 1}, {1, 0, 0}}};
    m.link_capsules = {{{0, 0, 0}, {1, 0, 0}, 0.1}};
    const auto caps = forward_kinematics(m, {3.14159265358979323846 / 2.0});
    CHECK(caps[0].a.norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(caps[0].b.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(caps[0].b.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(caps[0].b.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("forward kinematics matches the homogeneous-matrix oracle") {
    const RobotModel m = make_default_robot();
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Configuration q(m.dof());
        for (std::size_t i = 0; i < m.dof(); ++i)
            q[i] = rng.uniform(m.joints[i].lo, m.joints[i].hi);
        const auto got = forward_kinematics(m, q);
        const auto expected = fk_matrix_oracle(m, q);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK((got[i].a - expected[i].a).norm() < 1e-9);
            CHECK((got[i].b - expected[i].b).norm() < 1e-9);
        }
    }
}

TEST_CASE("forward kinematics is bitwise deterministic") {
    const RobotModel m = make_default_robot();
    const Configuration q = {0.3, -1.2, 0.7, 2.1, -0.4, 1.9};
    const auto a = forward_kinematics(m, q);
    const auto b = forward_kinematics(m, q);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].a == b[i].a);
        CHECK(a[i].b == b[i].b);
    }
}

TEST_CASE("forward kinematics rejects bad input") {
    const RobotModel m = make_default_robot();
    CHECK_THROWS_AS(forward_kinematics(m, {0.0}), std::invalid_argument);
    Configuration q(m.dof(), 0.0);
    q[2] = 100.0;
    CHECK_THROWS_AS(forward_kinematics(m, q), std::invalid_argument);
}

TEST_CASE("segment-segment distance: hand cases") {
    CHECK(segment_segment_distance({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // crossing segments
    CHECK(segment_segment_distance({-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}) ==
          doctest::Approx(0.0).epsilon(1e-15));
    // degenerate: both points
    CHECK(segment_segment_distance({0, 0, 0}, {0, 0, 0}, {3, 4, 0}, {3, 4, 0}) ==
          doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("segment-segment distance matches the grid-refinement oracle") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec3 a0 = random_point(rng), a1 = random_point(rng);
        const Vec3 b0 = random_point(rng), b1 = random_point(rng);
        const double got = segment_segment_distance(a0, a1, b0, b1);
        const double expected = segseg_grid_oracle(a0, a1, b0, b1);
        CHECK(std::abs(got - expected) < 1e-9);
    }
}

TEST_CASE("segment-segment distance is symmetric") {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec3 a0 = random_point(rng), a1 = random_point(rng);
        const Vec3 b0 = random_point(rng), b1 = random_point(rng);
        CHECK(segment_segment_distance(a0, a1, b0, b1) ==
              segment_segment_distance(b0, b1, a0, a1));
    }
}

TEST_CASE("capsule-sphere collision: axis, far, and tangency") {
    const Capsule c{{0, 0, 0}, {0, 0, 1}, 0.1};
    CHECK(capsule_sphere_collides(c, {{0, 0, 0.5}, 0.05}));
    CHECK_FALSE(capsule_sphere_collides(c, {{1, 0, 0.5}, 0.05}));
    // boundary contact: distance exactly equals the radius sum
    CHECK(capsule_sphere_collides(c, {{0.15, 0, 0.5}, 0.05}));
}

TEST_CASE("capsule-sphere collision agrees with the analytic distance on random cases") {
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const Capsule c{random_point(rng, 1.0), random_point(rng, 1.0),
                        rng.uniform(0.01, 0.3)};
        const Sphere s{random_point(rng, 1.5), rng.uniform(0.01, 0.3)};
        const double d = std::sqrt(point_segment_dist2(s.center, c.a, c.b));
        CHECK(capsule_sphere_collides(c, s) == (d <= c.radius + s.radius));
        // dense point-sampling of the axis can only ever find larger-or-equal
        // distances than the analytic minimum
        double sampled = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 2000; ++i) {
            const Vec3 p = c.a + (c.b - c.a) * (static_cast<double>(i) / 2000.0);
            sampled = std::min(sampled, (p - s.center).norm());
        }
        CHECK(d <= sampled + 1e-12);
        CHECK(sampled - d < 1e-5);
    }
}

TEST_CASE("capsule-capsule collision") {
    const Capsule a{{0, 0, 0}, {1, 0, 0}, 0.1};
    CHECK(capsule_capsule_collides(a, a));
    const Capsule b{{0, 1, 0}, {1, 1, 0}, 0.1};
    CHECK_FALSE(capsule_capsule_collides(a, b));

    Rng rng(10);
    for (int trial = 0; trial < 500; ++trial) {
        const Capsule c1{random_point(rng), random_point(rng), rng.uniform(0.05, 0.4)};
        const Capsule c2{random_point(rng), random_point(rng), rng.uniform(0.05, 0.4)};
        const double d = segment_segment_distance(c1.a, c1.b, c2.a, c2.b);
        CHECK(capsule_capsule_collides(c1, c2) == (d <= c1.radius + c2.radius));
    }
}

TEST_CASE("aabb_of: sphere, capsule, inflation") {
    const Aabb s = aabb_of(Sphere{{0, 0, 0}, 0.1}, 0.0);
    CHECK(s.min == Vec3{-0.1, -0.1, -0.1});
    CHECK(s.max == Vec3{0.1, 0.1, 0.1});

    const Aabb c = aabb_of(Capsule{{0, 0, 0}, {1, 0, 0}, 0.1}, 0.0);
    CHECK(c.min == Vec3{-0.1, -0.1, -0.1});
    CHECK(c.max == Vec3{1.1, 0.1, 0.1});

    const Aabb ci = aabb_of(Capsule{{0, 0, 0}, {1, 0, 0}, 0.1}, 0.05);
    CHECK(ci.min.x == doctest::Approx(-0.15).epsilon(1e-15));
    CHECK(ci.max.y == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("aabb soundness: shape points stay inside, collisions imply box overlap") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Capsule c{random_point(rng), random_point(rng), rng.uniform(0.05, 0.3)};
        const Aabb box = aabb_of(c, 0.0);
        for (int i = 0; i < 50; ++i) {
            // random point of the capsule: axis point + radius-scaled offset
            const Vec3 axis = c.a + (c.b - c.a) * rng.next_double();
            Vec3 dir = random_point(rng, 1.0);
            if (dir.norm() == 0.0) dir = {1, 0, 0};
            const Vec3 p = axis + dir.normalized() * (c.radius * rng.next_double());
            CHECK(box.contains(p));
        }

        const Sphere s{random_point(rng, 1.0), rng.uniform(0.05, 0.3)};
        if (capsule_sphere_collides(c, s)) CHECK(box.overlaps(aabb_of(s, 0.0)));
    }
}

#include <algorithm>
#include <set>

#include "doctest.h"
#include "sirrt/collision.hpp"
#include "sirrt/rng.hpp"
#include "sirrt/validate.hpp"

using namespace sirrt;

namespace {

// single vertical capsule link rotating about z; convenient for analytic cases
RobotModel stick_robot() {
    RobotModel m;
    m.joints = {{{0, 0, 1}, {0, 0, 1}}};
    m.link_capsules = {{{0, 0, 0}, {0, 0, 1}, 0.1}};
    return m;
}

Scene stick_scene() {
    Scene s;
    s.robot = stick_robot();
    s.grid = TimeGrid::make(20.0, 30.0);
    return s;
}

DynamicObstacle crossing_obstacle() {
    // sphere r=0.05 moving (-1,0,0.5) -> (1,0,0.5) over [0,20]; overlaps the
    // stick while |x(t)| <= 0.15, i.e. t in [8.5, 11.5]
    DynamicObstacle o;
    o.radius = 0.05;
    o.waypoints = {{0.0, {-1, 0, 0.5}}, {20.0, {1, 0, 0.5}}};
    return o;
}

DynamicObstacle stationary_obstacle(const Vec3& at, double radius, double t_max = 20.0) {
    DynamicObstacle o;
    o.radius = radius;
    o.waypoints = {{0.0, at}, {t_max, at}};
    return o;
}

Scene random_scene(Rng& rng, int k, const RobotModel& robot) {
    GeneratorParams params;
    const ProblemInstance inst =
        generate_instance(rng.next_u64(), k, params, robot);
    return inst.scene;
}

Configuration random_config(Rng& rng, const RobotModel& robot) {
    Configuration q(robot.dof());
    for (std::size_t i = 0; i < robot.dof(); ++i)
        q[i] = rng.uniform(robot.joints[i].lo, robot.joints[i].hi);
    return q;
}

}  // namespace

TEST_CASE("timed index: body counts and containment") {
    Scene empty = stick_scene();
    const CollisionEngine none(empty);
    CHECK(none.body_count() == 0);
    CHECK(none.broad_candidates(std::vector<Aabb>{Aabb{{-9, -9, -9}, {9, 9, 9}}}).empty());

    Scene one = stick_scene();
    one.dynamics.push_back(crossing_obstacle());
    const CollisionEngine engine(one);
    CHECK(engine.body_count() == 601);
    CHECK(engine.body_tick(0) == 0);
    CHECK(engine.body_tick(600) == 600);

    // every body's box contains its sphere
    for (std::size_t b = 0; b < engine.body_count(); ++b) {
        const Sphere s = engine.body_sphere(b);
        const Aabb box = aabb_of(s, 0.0);
        CHECK(box.contains(s.center));
        CHECK(box.min.x == s.center.x - s.radius);
        const Vec3 expected = position_at(one.dynamics[0], one.grid.tick_time(engine.body_tick(b)));
        CHECK(s.center == expected);
    }
}

TEST_CASE("broad candidates: far boxes, single-tick overlap, superset property") {
    Scene scene = stick_scene();
    // obstacle overlapping the link only at one specific tick
    DynamicObstacle o;
    o.radius = 0.05;
    o.waypoints = {{0.0, {50, 0, 0.5}}, {5.0, {0.05, 0, 0.5}}, {5.0 + 1.0 / 30.0, {50, 0, 0.5}},
                   {20.0, {50, 0, 0.5}}};
    scene.dynamics.push_back(o);
    const CollisionEngine engine(scene);

    const std::vector<Aabb> far{Aabb{{100, 100, 100}, {101, 101, 101}}};
    CHECK(engine.broad_candidates(far).empty());

    const auto caps = forward_kinematics(scene.robot, {0.0});
    std::vector<Aabb> boxes;
    for (const Capsule& c : caps) boxes.push_back(aabb_of(c, 0.0));
    const auto cand = engine.broad_candidates(boxes);
    const int tick_150 = 150;  // t = 5 s
    CHECK(std::any_of(cand.begin(), cand.end(), [&](std::uint32_t b) {
        return engine.body_tick(b) == tick_150 && engine.body_obstacle(b) == 0;
    }));

    // superset of the narrow-phase-positive set on random configurations
    Rng rng(41);
    const RobotModel robot = make_default_robot();
    const Scene rscene = random_scene(rng, 15, robot);
    const CollisionEngine rengine(rscene);
    for (int trial = 0; trial < 200; ++trial) {
        const Configuration q = random_config(rng, robot);
        const auto links = forward_kinematics(robot, q);
        std::vector<Aabb> rboxes;
        for (const Capsule& c : links) rboxes.push_back(aabb_of(c, 0.0));
        const auto got = rengine.broad_candidates(rboxes);
        const std::set<std::uint32_t> got_set(got.begin(), got.end());
        for (std::size_t b = 0; b < rengine.body_count(); ++b) {
            const Sphere s = rengine.body_sphere(b);
            bool narrow = false;
            for (const Capsule& c : links)
                if (capsule_sphere_collides(c, s)) narrow = true;
            if (narrow) CHECK(got_set.count(static_cast<std::uint32_t>(b)) == 1);
        }
    }
}

TEST_CASE("config_collides: empty, permanent, crossing") {
    Scene empty = stick_scene();
    const CollisionEngine none(empty);
    CHECK_FALSE(none.config_collides({0.0}, 0.0));
    CHECK_FALSE(none.config_collides({1.0}, 13.37));

    Scene blocked = stick_scene();
    blocked.dynamics.push_back(stationary_obstacle({0, 0, 0.5}, 0.05));
    const CollisionEngine always(blocked);
    for (double t : {0.0, 5.0, 19.99, 20.0}) CHECK(always.config_collides({0.0}, t));

    Scene crossing = stick_scene();
    crossing.dynamics.push_back(crossing_obstacle());
    const CollisionEngine engine(crossing);
    CHECK(engine.config_collides({0.0}, 9.0));
    CHECK(engine.config_collides({0.0}, 10.0));
    CHECK_FALSE(engine.config_collides({0.0}, 8.4));
    CHECK_FALSE(engine.config_collides({0.0}, 11.6));
    CHECK_FALSE(engine.config_collides({0.0}, 0.0));
    CHECK_FALSE(engine.config_collides({0.0}, 20.0));
}

TEST_CASE("compute_safe_intervals: trivial cases") {
    Scene empty = stick_scene();
    const CollisionEngine none(empty);
    const SafeIntervalSet full = none.compute_safe_intervals({0.0});
    REQUIRE(full.size() == 1);
    CHECK(full[0].tick_lo == 0);
    CHECK(full[0].tick_hi == 600);
    CHECK(full[0].t_l == 0.0);
    CHECK(full[0].t_u == 20.0);

    Scene blocked = stick_scene();
    blocked.dynamics.push_back(stationary_obstacle({0, 0, 0.5}, 0.05));
    const CollisionEngine always(blocked);
    CHECK(always.compute_safe_intervals({0.0}).empty());

    // static obstacle on the robot short-circuits to empty
    Scene stat = stick_scene();
    stat.statics.push_back({Sphere{{0, 0, 0.5}, 0.05}});
    const CollisionEngine senge(stat);
    CHECK(senge.compute_safe_intervals({0.0}).empty());
}

TEST_CASE("compute_safe_intervals: crossing obstacle splits the horizon in two") {
    Scene crossing = stick_scene();
    crossing.dynamics.push_back(crossing_obstacle());
    const CollisionEngine engine(crossing);
    const SafeIntervalSet got = engine.compute_safe_intervals({0.0});

    const SafeIntervalSet expected = naive_safe_intervals(crossing, {0.0});
    CHECK(got == expected);

    REQUIRE(got.size() == 2);
    CHECK(got[0].tick_lo == 0);
    // the analytic boundaries are t=8.5 (tick 255) and t=11.5 (tick 345);
    // the oracle pins the exact tick, which floating point may move by one
    CHECK(std::abs(got[0].tick_hi - 254) <= 1);
    CHECK(std::abs(got[1].tick_lo - 346) <= 1);
    CHECK(got[1].tick_hi == 600);
}

TEST_CASE("compute_safe_intervals equals the naive oracle on random scenes") {
    Rng rng(51);
    const RobotModel robot = make_default_robot();
    int checked = 0;
    for (int s = 0; s < 10; ++s) {
        Scene scene = random_scene(rng, 2 + s * 5, robot);
        if (s % 3 == 2)
            scene.statics.push_back({Sphere{{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                             rng.uniform(-0.5, 0.5)},
                                            0.08}});
        const CollisionEngine engine(scene);
        for (int i = 0; i < 20; ++i) {
            const Configuration q = random_config(rng, robot);
            const SafeIntervalSet got = engine.compute_safe_intervals(q);
            const SafeIntervalSet expected = naive_safe_intervals(scene, q);
            REQUIRE(got == expected);
            ++checked;

            // interval partition: safe ticks + colliding ticks cover the grid
            std::vector<char> safe(static_cast<std::size_t>(scene.grid.tick_count), 0);
            for (const SafeInterval& si : got)
                for (int k = si.tick_lo; k <= si.tick_hi; ++k) safe[static_cast<std::size_t>(k)] = 1;
            for (int k = 0; k < scene.grid.tick_count; ++k) {
                const bool collides = naive_config_collides(scene, q, scene.grid.tick_time(k));
                CHECK(safe[static_cast<std::size_t>(k)] == (collides ? 0 : 1));
            }
        }
    }
    CHECK(checked == 200);
}

TEST_CASE("adding an obstacle never enlarges a safe interval set") {
    Rng rng(61);
    const RobotModel robot = make_default_robot();
    Scene scene = random_scene(rng, 8, robot);
    Scene more = scene;
    more.dynamics.push_back(stationary_obstacle({0.2, 0.1, 0.3}, 0.09));
    const CollisionEngine base(scene);
    const CollisionEngine extended(more);
    for (int i = 0; i < 50; ++i) {
        const Configuration q = random_config(rng, robot);
        std::set<int> base_ticks, ext_ticks;
        for (const SafeInterval& si : base.compute_safe_intervals(q))
            for (int k = si.tick_lo; k <= si.tick_hi; ++k) base_ticks.insert(k);
        for (const SafeInterval& si : extended.compute_safe_intervals(q))
            for (int k = si.tick_lo; k <= si.tick_hi; ++k) ext_ticks.insert(k);
        CHECK(std::includes(base_ticks.begin(), base_ticks.end(), ext_ticks.begin(),
                            ext_ticks.end()));
    }
}

TEST_CASE("motion_collides: trivial cases and the finer-sampling relation") {
    Scene empty = stick_scene();
    const CollisionEngine none(empty);
    CHECK_FALSE(none.motion_collides({0.0}, {0.0}, 3.0, 3.0));
    CHECK_FALSE(none.motion_collides({0.0}, {1.0}, 0.0, 1.0));

    Scene stat;
    stat.robot.joints = {{{0, 0, 1}, {0, 0, 0}}};
    stat.robot.link_capsules = {{{0, 0, 0}, {1, 0, 0}, 0.1}};
    stat.grid = TimeGrid::make(20.0, 30.0);
    stat.statics.push_back({Sphere{{0, 0.7, 0}, 0.2}});
    const CollisionEngine wall(stat);
    // sweeping the horizontal link from +x toward -x passes through +y
    CHECK(wall.motion_collides({0.0}, {3.0}, 0.0, 3.0));

    // 4x-finer resampling: every 30 Hz-positive motion is also positive at
    // 120 Hz (sample superset); the reverse misses are the tunneling metric
    Rng rng(71);
    const RobotModel robot = make_default_robot();
    const Scene scene = random_scene(rng, 20, robot);
    Scene fine_scene = scene;
    fine_scene.grid = TimeGrid::make(scene.grid.t_max, 4.0 * scene.grid.frequency);
    const CollisionEngine engine(scene);
    const CollisionEngine fine(fine_scene);
    int tunneling = 0, coarse_hits = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const Configuration q0 = random_config(rng, robot);
        Configuration q1 = q0;
        for (auto& v : q1)
            v = std::clamp(v + rng.uniform(-0.5, 0.5), -3.14159265358979323846,
                           3.14159265358979323846);
        const double depart = rng.uniform(0.0, 18.0);
        const double arrive = depart + configuration_distance(q0, q1);  // v_max = 1
        const bool coarse = engine.motion_collides(q0, q1, depart, arrive);
        const bool finer = fine.motion_collides(q0, q1, depart, arrive);
        if (coarse) {
            ++coarse_hits;
            CHECK(finer);
        } else if (finer) {
            ++tunneling;
        }
        // determinism: re-checking reproduces the same answer
        CHECK(engine.motion_collides(q0, q1, depart, arrive) == coarse);
    }
    MESSAGE("tunneling events at 4x resolution: ", tunneling, " / 500 (coarse hits ",
            coarse_hits, ")");
}

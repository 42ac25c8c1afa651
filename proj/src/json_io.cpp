#include "sirrt/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sirrt {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error(std::string(field) + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json config_to_json(const Configuration& q) { return json(q); }

Configuration config_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw std::runtime_error(std::string(field) + ": expected an array");
    return j.get<Configuration>();
}

const json& require(const json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end()) throw std::runtime_error(std::string("missing field: ") + field);
    return *it;
}

json robot_to_json_obj(const RobotModel& m) {
    json joints = json::array();
    for (const JointSpec& jt : m.joints)
        joints.push_back({{"axis", vec3_to_json(jt.axis)},
                          {"translation", vec3_to_json(jt.translation)},
                          {"limits", json::array({jt.lo, jt.hi})}});
    json links = json::array();
    for (const Capsule& c : m.link_capsules)
        links.push_back(
            {{"a", vec3_to_json(c.a)}, {"b", vec3_to_json(c.b)}, {"radius", c.radius}});

    // base pose as translation + axis-angle rotation
    const Mat3& r = m.base_pose.rot;
    const double trace = r.m[0] + r.m[4] + r.m[8];
    double angle = std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
    Vec3 axis{0, 0, 1};
    if (angle > 1e-12) {
        axis = Vec3{r.m[7] - r.m[5], r.m[2] - r.m[6], r.m[3] - r.m[1]}.normalized();
        if (axis.squared_norm() == 0.0) axis = {0, 0, 1};
    } else {
        angle = 0.0;
    }
    return {{"joints", joints},
            {"links", links},
            {"base",
             {{"translation", vec3_to_json(m.base_pose.pos)},
              {"rotation", {{"axis", vec3_to_json(axis)}, {"angle", angle}}}}}};
}

RobotModel robot_from_json_obj(const json& j) {
    RobotModel m;
    for (const json& jt : require(j, "joints")) {
        JointSpec spec;
        spec.axis = vec3_from_json(require(jt, "axis"), "joints.axis").normalized();
        spec.translation = vec3_from_json(require(jt, "translation"), "joints.translation");
        const json& lim = require(jt, "limits");
        if (!lim.is_array() || lim.size() != 2)
            throw std::runtime_error("joints.limits: expected [lo, hi]");
        spec.lo = lim[0].get<double>();
        spec.hi = lim[1].get<double>();
        m.joints.push_back(spec);
    }
    for (const json& jl : require(j, "links")) {
        Capsule c;
        c.a = vec3_from_json(require(jl, "a"), "links.a");
        c.b = vec3_from_json(require(jl, "b"), "links.b");
        c.radius = require(jl, "radius").get<double>();
        m.link_capsules.push_back(c);
    }
    if (j.contains("base")) {
        const json& base = j["base"];
        m.base_pose.pos = vec3_from_json(require(base, "translation"), "base.translation");
        const json& rot = require(base, "rotation");
        m.base_pose.rot = Mat3::axis_angle(vec3_from_json(require(rot, "axis"), "base.rotation.axis"),
                                           require(rot, "angle").get<double>());
    }
    m.validate();
    return m;
}

json static_to_json(const StaticObstacle& s) {
    return std::visit(
        [](const auto& shape) -> json {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Sphere>)
                return {{"type", "sphere"},
                        {"center", vec3_to_json(shape.center)},
                        {"radius", shape.radius}};
            else
                return {{"type", "capsule"},
                        {"a", vec3_to_json(shape.a)},
                        {"b", vec3_to_json(shape.b)},
                        {"radius", shape.radius}};
        },
        s.shape);
}

StaticObstacle static_from_json(const json& j) {
    const std::string type = require(j, "type").get<std::string>();
    if (type == "sphere")
        return {Sphere{vec3_from_json(require(j, "center"), "statics.center"),
                       require(j, "radius").get<double>()}};
    if (type == "capsule")
        return {Capsule{vec3_from_json(require(j, "a"), "statics.a"),
                        vec3_from_json(require(j, "b"), "statics.b"),
                        require(j, "radius").get<double>()}};
    throw std::runtime_error("statics.type: unknown shape '" + type + "'");
}

}  // namespace

std::string robot_to_json(const RobotModel& model) { return robot_to_json_obj(model).dump(2); }

RobotModel robot_from_json(const std::string& text) {
    return robot_from_json_obj(json::parse(text));
}

std::string instance_to_json(const ProblemInstance& inst) {
    json dynamics = json::array();
    for (const DynamicObstacle& o : inst.scene.dynamics) {
        json wps = json::array();
        for (const auto& w : o.waypoints)
            wps.push_back(json::array({w.time, w.center.x, w.center.y, w.center.z}));
        dynamics.push_back({{"radius", o.radius}, {"waypoints", wps}});
    }
    json statics = json::array();
    for (const StaticObstacle& s : inst.scene.statics) statics.push_back(static_to_json(s));

    const json j = {
        {"schema", "sirrt-instance-v1"},
        {"seed", inst.seed},
        {"k", inst.scene.dynamics.size()},
        {"grid", {{"t_max", inst.scene.grid.t_max}, {"frequency", inst.scene.grid.frequency}}},
        {"bounds",
         {{"min", vec3_to_json(inst.scene.bounds.min)}, {"max", vec3_to_json(inst.scene.bounds.max)}}},
        {"robot", robot_to_json_obj(inst.scene.robot)},
        {"statics", statics},
        {"dynamics", dynamics},
        {"q_start", config_to_json(inst.q_start)},
        {"q_goal", config_to_json(inst.q_goal)},
    };
    return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& text,
                                   const std::filesystem::path& base_dir) {
    const json j = json::parse(text);
    ProblemInstance inst;
    inst.seed = require(j, "seed").get<std::uint64_t>();

    if (j.contains("robot")) {
        inst.scene.robot = robot_from_json_obj(j["robot"]);
    } else if (j.contains("robot_file")) {
        const std::filesystem::path p = base_dir / j["robot_file"].get<std::string>();
        inst.scene.robot = robot_from_json(read_text_file(p));
    } else {
        throw std::runtime_error("missing field: robot (or robot_file)");
    }

    const json& grid = require(j, "grid");
    inst.scene.grid =
        TimeGrid::make(require(grid, "t_max").get<double>(), require(grid, "frequency").get<double>());

    if (j.contains("bounds")) {
        inst.scene.bounds.min = vec3_from_json(require(j["bounds"], "min"), "bounds.min");
        inst.scene.bounds.max = vec3_from_json(require(j["bounds"], "max"), "bounds.max");
    }
    if (j.contains("statics"))
        for (const json& s : j["statics"]) inst.scene.statics.push_back(static_from_json(s));
    for (const json& o : require(j, "dynamics")) {
        DynamicObstacle d;
        d.radius = require(o, "radius").get<double>();
        for (const json& w : require(o, "waypoints")) {
            if (!w.is_array() || w.size() != 4)
                throw std::runtime_error("dynamics.waypoints: expected [t, x, y, z]");
            d.waypoints.push_back({w[0].get<double>(),
                                   {w[1].get<double>(), w[2].get<double>(), w[3].get<double>()}});
        }
        if (d.waypoints.empty() || d.waypoints.front().time != 0.0 ||
            d.waypoints.back().time != inst.scene.grid.t_max)
            throw std::runtime_error("dynamics.waypoints: must cover [0, t_max]");
        for (std::size_t i = 1; i < d.waypoints.size(); ++i)
            if (!(d.waypoints[i - 1].time < d.waypoints[i].time))
                throw std::runtime_error("dynamics.waypoints: times must be strictly increasing");
        if (!(d.radius > 0.0)) throw std::runtime_error("dynamics.radius: must be positive");
        inst.scene.dynamics.push_back(std::move(d));
    }
    inst.q_start = config_from_json(require(j, "q_start"), "q_start");
    inst.q_goal = config_from_json(require(j, "q_goal"), "q_goal");
    if (inst.q_start.size() != inst.scene.robot.dof() ||
        inst.q_goal.size() != inst.scene.robot.dof())
        throw std::runtime_error("q_start/q_goal: dimension does not match robot");
    return inst;
}

namespace {

json params_to_json(const PlannerParams& p) {
    return {{"delta_planner", p.delta_planner}, {"delta_parent", p.delta_parent},
            {"v_max", p.v_max},                 {"budget_s", p.time_budget},
            {"trim", p.trim},                   {"max_iterations", p.max_iterations}};
}

PlannerParams params_from_json(const json& j) {
    PlannerParams p;
    p.delta_planner = j.value("delta_planner", p.delta_planner);
    p.delta_parent = j.value("delta_parent", p.delta_parent);
    p.v_max = j.value("v_max", p.v_max);
    p.time_budget = j.value("budget_s", p.time_budget);
    p.trim = j.value("trim", p.trim);
    p.max_iterations = j.value("max_iterations", p.max_iterations);
    return p;
}

json stats_to_json(const PlanStats& s) {
    return {{"success", s.success},
            {"failure_reason", s.failure_reason},
            {"iterations", s.iterations},
            {"interval_queries", s.interval_queries},
            {"nodes_start", s.nodes_start},
            {"nodes_goal", s.nodes_goal},
            {"wall_seconds", s.wall_seconds},
            {"index_build_seconds", s.index_build_seconds},
            {"t_arrival", s.t_arrival},
            {"t_arrival_raw", s.t_arrival_raw}};
}

PlanStats stats_from_json(const json& j) {
    PlanStats s;
    s.success = j.value("success", false);
    s.failure_reason = j.value("failure_reason", std::string{});
    s.iterations = j.value("iterations", 0L);
    s.interval_queries = j.value("interval_queries", 0L);
    s.nodes_start = j.value("nodes_start", std::size_t{0});
    s.nodes_goal = j.value("nodes_goal", std::size_t{0});
    s.wall_seconds = j.value("wall_seconds", 0.0);
    s.index_build_seconds = j.value("index_build_seconds", 0.0);
    s.t_arrival = j.value("t_arrival", -1.0);
    s.t_arrival_raw = j.value("t_arrival_raw", -1.0);
    return s;
}

}  // namespace

std::string path_to_json(const PathFile& file) {
    json segments = json::array();
    for (const PathSegment& s : file.path.segments)
        segments.push_back({{"q", config_to_json(s.q)},
                            {"wait_until", s.wait_until},
                            {"depart", s.depart},
                            {"arrive", s.arrive}});
    const json j = {{"schema", "sirrt-path-v1"},
                    {"planner", file.planner},
                    {"seed", file.seed},
                    {"params", params_to_json(file.params)},
                    {"segments", segments},
                    {"t_arrival", file.path.t_arrival},
                    {"meet_index", file.path.meet_index},
                    {"stats", stats_to_json(file.stats)}};
    return j.dump(2);
}

PathFile path_from_json(const std::string& text) {
    const json j = json::parse(text);
    PathFile f;
    f.planner = j.value("planner", std::string("si-rrt"));
    f.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params")) f.params = params_from_json(j["params"]);
    if (j.contains("stats")) f.stats = stats_from_json(j["stats"]);
    for (const json& s : require(j, "segments")) {
        PathSegment seg;
        seg.q = config_from_json(require(s, "q"), "segments.q");
        seg.wait_until = require(s, "wait_until").get<double>();
        seg.depart = require(s, "depart").get<double>();
        seg.arrive = require(s, "arrive").get<double>();
        f.path.segments.push_back(std::move(seg));
    }
    f.path.t_arrival = require(j, "t_arrival").get<double>();
    f.path.meet_index = j.value("meet_index", 0);
    return f;
}

std::string report_to_json(const ValidationReport& report, double frequency) {
    json violations = json::array();
    for (const Violation& v : report.violations)
        violations.push_back({{"time", v.time},
                              {"kind", violation_kind_name(v.kind)},
                              {"detail", v.detail}});
    const json j = {{"valid", report.valid},
                    {"frequency", frequency},
                    {"checked_samples", report.checked_samples},
                    {"violations", violations}};
    return j.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sirrt

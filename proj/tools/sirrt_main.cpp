// Command-line harness: instance generation, planning, validation, and
// batch benchmarking over the shared library.
// Exit codes: 0 success, 1 planning failure, 2 validation failure,
// 3 I/O or configuration error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sirrt/bench.hpp"
#include "sirrt/json_io.hpp"
#include "sirrt/planner.hpp"
#include "sirrt/rng.hpp"
#include "sirrt/validate.hpp"

namespace fs = std::filesystem;
using namespace sirrt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitError = 3;

std::string instance_file_name(int k, int index) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "instance_k%03d_i%03d.json", k, index);
    return buf;
}

int cmd_generate(std::uint64_t seed, std::vector<int> counts, int n_instances, double t_max,
                 double freq_hz, double delta_planner, const std::string& robot_file,
                 const fs::path& out_dir) {
    if (counts.empty()) counts = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200,
                                  220, 240, 260, 280, 300};
    std::sort(counts.begin(), counts.end());

    RobotModel robot =
        robot_file.empty() ? make_default_robot() : robot_from_json(read_text_file(robot_file));
    GeneratorParams gp;
    gp.t_max = t_max;
    gp.frequency = freq_hz;
    gp.min_start_goal_distance = delta_planner;
    fs::create_directories(out_dir);

    for (int i = 0; i < n_instances; ++i) {
        const std::uint64_t instance_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        // grow one instance through the count chain so larger-K instances
        // are supersets of smaller ones
        ProblemInstance inst = generate_instance(instance_seed, counts.front(), gp, robot);
        write_text_file(out_dir / instance_file_name(counts.front(), i), instance_to_json(inst));
        for (std::size_t c = 1; c < counts.size(); ++c) {
            if (counts[c] < counts[c - 1])
                throw std::runtime_error("generate: counts must be non-decreasing");
            inst = incremental_extend(inst, counts[c] - counts[c - 1], gp);
            write_text_file(out_dir / instance_file_name(counts[c], i), instance_to_json(inst));
        }
        std::cout << "instance " << i << ": k chain";
        for (int k : counts) std::cout << ' ' << k;
        std::cout << " done\n";
    }
    return kExitOk;
}

int cmd_plan(const fs::path& instance_file, const std::string& planner_name,
             const PlannerParams& params, const fs::path& out_file) {
    const ProblemInstance instance =
        instance_from_json(read_text_file(instance_file), instance_file.parent_path());
    const PlanResult run = planner_name == "st-baseline" ? plan_baseline_st(instance, params)
                                                         : plan(instance, params);

    std::cout << (run.stats.success ? "success" : "failure") << " after "
              << run.stats.iterations << " iterations, " << run.stats.wall_seconds << " s";
    if (run.stats.success)
        std::cout << ", t_arrival " << run.stats.t_arrival << " (raw " << run.stats.t_arrival_raw
                  << ")";
    else
        std::cout << ": " << run.stats.failure_reason;
    std::cout << "\n";

    if (run.path && !out_file.empty()) {
        PathFile pf;
        pf.path = *run.path;
        pf.planner = planner_name;
        pf.seed = params.rng_seed;
        pf.params = params;
        pf.stats = run.stats;
        write_text_file(out_file, path_to_json(pf));
        std::cout << "path written to " << out_file << "\n";
    }
    return run.stats.success ? kExitOk : kExitPlanFailure;
}

int cmd_validate(const fs::path& path_file, const fs::path& instance_file, double freq_hz,
                 const fs::path& out_file) {
    const ProblemInstance instance =
        instance_from_json(read_text_file(instance_file), instance_file.parent_path());
    const PathFile pf = path_from_json(read_text_file(path_file));
    const double frequency = freq_hz > 0.0 ? freq_hz : instance.scene.grid.frequency;

    const ValidateParams vp{pf.params.v_max, pf.params.delta_parent, 1e-9};
    const ValidationReport report = validate_path(pf.path, instance, frequency, vp);
    const std::string text = report_to_json(report, frequency);
    if (!out_file.empty())
        write_text_file(out_file, text);
    else
        std::cout << text << "\n";
    std::cerr << (report.valid ? "valid" : "INVALID") << " (" << report.checked_samples
              << " samples, " << report.violations.size() << " violations)\n";
    return report.valid ? kExitOk : kExitInvalid;
}

int cmd_bench(const fs::path& instance_dir, const BenchOptions& options, const fs::path& out_csv) {
    const auto instances = load_instance_dir(instance_dir);
    const BenchResult result = run_bench(instances, options);
    if (!out_csv.empty()) {
        write_text_file(out_csv, records_to_csv(result.records));
        // machine context lives in a sidecar so the CSV stays reproducible
        write_text_file(out_csv.string() + ".meta.json", bench_metadata_json(options));
        std::cout << "records written to " << out_csv << "\n";
    }
    std::cout << summary_to_text(result.summary);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Safe-interval RRT planning benchmark for a capsule manipulator among moving "
                 "obstacles"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a deterministic instance suite");
    std::uint64_t gen_seed = 1;
    std::vector<int> gen_counts;
    int gen_n = 50;
    double gen_tmax = 20.0, gen_freq = 30.0, gen_delta_planner = 1.0;
    std::string gen_robot;
    std::string gen_out = "instances";
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--k", gen_counts, "Obstacle counts (non-decreasing chain)");
    gen->add_option("--n-instances", gen_n, "Instances per count");
    gen->add_option("--t-max", gen_tmax, "Time horizon, s")->check(CLI::PositiveNumber);
    gen->add_option("--freq-hz", gen_freq, "Collision-check frequency, Hz")
        ->check(CLI::PositiveNumber);
    gen->add_option("--delta-planner", gen_delta_planner,
                    "Minimum start/goal separation, rad");
    gen->add_option("--robot", gen_robot, "Robot model JSON (default: bundled model)");
    gen->add_option("--out", gen_out, "Output directory");

    // shared planner params
    const auto add_planner_options = [](CLI::App* cmd, PlannerParams& p, std::string& name) {
        cmd->add_option("--planner", name, "si-rrt or st-baseline")
            ->check(CLI::IsMember({"si-rrt", "st-baseline"}));
        cmd->add_option("--seed", p.rng_seed, "Planner RNG seed");
        cmd->add_option("--budget-s", p.time_budget, "Wall-clock budget, s")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--delta-planner", p.delta_planner, "Max extension step, rad")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--delta-parent", p.delta_parent, "Parent-search radius, rad")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--v-max", p.v_max, "Joint-space speed bound, rad/s")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iterations", p.max_iterations,
                        "Iteration cap (0 = wall budget only)");
    };

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Plan one instance and write the path");
    std::string plan_instance, plan_out = "path.json", plan_planner = "si-rrt";
    PlannerParams plan_params;
    bool plan_no_trim = false;
    plan_cmd->add_option("instance", plan_instance, "Instance JSON file")->required();
    add_planner_options(plan_cmd, plan_params, plan_planner);
    plan_cmd->add_flag("--no-trim", plan_no_trim, "Skip wait trimming");
    plan_cmd->add_option("--out", plan_out, "Output path file");

    // validate
    auto* val = app.add_subcommand("validate", "Re-validate a path against its instance");
    std::string val_path, val_instance, val_out;
    double val_freq = 0.0;
    val->add_option("path", val_path, "Path JSON file")->required();
    val->add_option("instance", val_instance, "Instance JSON file")->required();
    val->add_option("--freq-hz", val_freq, "Sampling frequency (default: instance grid)");
    val->add_option("--out", val_out, "Write the report JSON here instead of stdout");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the benchmark over an instance directory");
    std::string bench_dir, bench_out = "bench.csv", bench_paths_dir;
    BenchOptions bench_options;
    bench->add_option("dir", bench_dir, "Instance directory")->required();
    bench->add_option("--planner", bench_options.planners,
                      "Planners to run (default: si-rrt st-baseline)")
        ->check(CLI::IsMember({"si-rrt", "st-baseline"}));
    bench->add_option("--repeats", bench_options.repeats, "Repeats per instance")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_options.seed, "Bench master seed");
    bench->add_option("--budget-s", bench_options.params.time_budget, "Per-run budget, s")
        ->check(CLI::PositiveNumber);
    bench->add_option("--delta-planner", bench_options.params.delta_planner, "Step, rad");
    bench->add_option("--delta-parent", bench_options.params.delta_parent, "Parent radius, rad");
    bench->add_option("--v-max", bench_options.params.v_max, "Speed bound, rad/s");
    bench->add_option("--jobs", bench_options.jobs, "Parallel runs");
    bench->add_option("--paths-dir", bench_paths_dir, "Write every successful path here");
    bench->add_option("--out", bench_out, "Output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_seed, gen_counts, gen_n, gen_tmax, gen_freq,
                                gen_delta_planner, gen_robot, gen_out);
        if (plan_cmd->parsed()) {
            plan_params.trim = !plan_no_trim;
            return cmd_plan(plan_instance, plan_planner, plan_params, plan_out);
        }
        if (val->parsed()) return cmd_validate(val_path, val_instance, val_freq, val_out);
        if (bench->parsed()) {
            if (!bench_paths_dir.empty()) {
                std::filesystem::create_directories(bench_paths_dir);
                bench_options.paths_dir = bench_paths_dir;
            }
            return cmd_bench(bench_dir, bench_options, bench_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

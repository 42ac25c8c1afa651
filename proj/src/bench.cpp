#include "sirrt/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sirrt/json_io.hpp"
#include "sirrt/kernels.hpp"
#include "sirrt/rng.hpp"
#include "sirrt/validate.hpp"

namespace sirrt {

namespace {

double quantile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = idx - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

}  // namespace

BenchResult run_bench(const std::vector<std::pair<std::string, ProblemInstance>>& instances,
                      const BenchOptions& options) {
    struct Task {
        std::size_t instance_idx;
        std::size_t planner_idx;
        int repeat;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t p = 0; p < options.planners.size(); ++p)
            for (int r = 0; r < options.repeats; ++r) tasks.push_back({i, p, r});

    BenchResult result;
    result.records.resize(tasks.size());

    const auto run_task = [&](std::size_t task_idx) {
        const Task& task = tasks[task_idx];
        const auto& [id, instance] = instances[task.instance_idx];
        const std::string& planner_name = options.planners[task.planner_idx];

        PlannerParams params = options.params;
        params.rng_seed = mix_seed(options.seed, instance.seed,
                                   static_cast<std::uint64_t>(task.repeat));

        const PlanResult run = planner_name == "st-baseline" ? plan_baseline_st(instance, params)
                                                             : plan(instance, params);

        BenchRecord rec;
        rec.instance_id = id;
        rec.k = static_cast<int>(instance.scene.dynamics.size());
        rec.planner = planner_name;
        rec.repeat = task.repeat;
        rec.seed = params.rng_seed;
        rec.success = run.stats.success;
        rec.runtime_s = run.stats.wall_seconds;
        rec.index_build_s = run.stats.index_build_seconds;
        rec.t_arrival = run.stats.t_arrival;
        rec.t_arrival_raw = run.stats.t_arrival_raw;
        rec.iterations = run.stats.iterations;
        rec.nodes_start = run.stats.nodes_start;
        rec.nodes_goal = run.stats.nodes_goal;
        rec.interval_queries = run.stats.interval_queries;

        if (run.path) {
            const ValidateParams vp{params.v_max, params.delta_parent, 1e-9};
            rec.validated =
                validate_path(*run.path, instance, instance.scene.grid.frequency, vp).valid;
            if (!options.paths_dir.empty()) {
                PathFile pf;
                pf.path = *run.path;
                pf.planner = planner_name;
                pf.seed = params.rng_seed;
                pf.params = params;
                pf.stats = run.stats;
                write_text_file(options.paths_dir / (id + "." + planner_name + ".r" +
                                                     std::to_string(task.repeat) + ".path.json"),
                                path_to_json(pf));
            }
        }
        result.records[task_idx] = std::move(rec);
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    run_task(i);
            });
        for (auto& t : workers) t.join();
    }

    // summary per (k, planner); runtime/arrival quartiles over the
    // (instance, repeat) runs solved by every planner
    std::map<std::pair<std::string, int>, std::map<std::string, const BenchRecord*>> by_run;
    for (const BenchRecord& r : result.records)
        by_run[{r.instance_id, r.repeat}][r.planner] = &r;

    std::map<std::pair<int, std::string>, BenchSummaryRow> rows;
    for (const BenchRecord& r : result.records) {
        BenchSummaryRow& row = rows[{r.k, r.planner}];
        row.k = r.k;
        row.planner = r.planner;
        ++row.attempts;
        if (r.success) ++row.successes;
    }
    std::map<std::pair<int, std::string>, std::vector<double>> runtimes, arrivals;
    for (const auto& [key, per_planner] : by_run) {
        const bool all_solved =
            per_planner.size() == options.planners.size() &&
            std::all_of(per_planner.begin(), per_planner.end(),
                        [](const auto& kv) { return kv.second->success; });
        if (!all_solved) continue;
        for (const auto& [name, rec] : per_planner) {
            runtimes[{rec->k, name}].push_back(rec->runtime_s);
            arrivals[{rec->k, name}].push_back(rec->t_arrival);
        }
    }
    for (auto& [key, row] : rows) {
        const auto rt = runtimes.find(key);
        if (rt != runtimes.end()) {
            row.mutually_solved = static_cast<int>(rt->second.size());
            row.runtime_q25 = quantile(rt->second, 0.25);
            row.runtime_median = quantile(rt->second, 0.5);
            row.runtime_q75 = quantile(rt->second, 0.75);
            const auto& arr = arrivals[key];
            row.arrival_q25 = quantile(arr, 0.25);
            row.arrival_median = quantile(arr, 0.5);
            row.arrival_q75 = quantile(arr, 0.75);
        }
        result.summary.push_back(row);
    }
    return result;
}

std::string records_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "instance,k,planner,repeat,seed,success,valid,runtime_s,index_build_s,"
           "t_arrival,t_arrival_raw,iterations,nodes_start,nodes_goal,interval_queries\n";
    for (const BenchRecord& r : records) {
        out << r.instance_id << ',' << r.k << ',' << r.planner << ',' << r.repeat << ',' << r.seed
            << ',' << (r.success ? 1 : 0) << ',' << (r.validated ? 1 : 0) << ','
            << format_double(r.runtime_s) << ',' << format_double(r.index_build_s) << ',';
        if (r.success) out << format_double(r.t_arrival) << ',' << format_double(r.t_arrival_raw);
        else out << ',';
        out << ',' << r.iterations << ',' << r.nodes_start << ',' << r.nodes_goal << ','
            << r.interval_queries << '\n';
    }
    return out.str();
}

std::string summary_to_text(const std::vector<BenchSummaryRow>& summary) {
    std::ostringstream out;
    out << "k,planner,attempts,successes,success_rate,mutually_solved,"
           "runtime_q25,runtime_median,runtime_q75,arrival_q25,arrival_median,arrival_q75\n";
    for (const BenchSummaryRow& r : summary) {
        const double sr =
            r.attempts > 0 ? static_cast<double>(r.successes) / static_cast<double>(r.attempts)
                           : 0.0;
        out << r.k << ',' << r.planner << ',' << r.attempts << ',' << r.successes << ','
            << format_double(sr) << ',' << r.mutually_solved << ','
            << format_double(r.runtime_q25) << ',' << format_double(r.runtime_median) << ','
            << format_double(r.runtime_q75) << ',' << format_double(r.arrival_q25) << ','
            << format_double(r.arrival_median) << ',' << format_double(r.arrival_q75) << '\n';
    }
    return out.str();
}

std::string bench_metadata_json(const BenchOptions& options) {
    char host[256] = "unknown";
    gethostname(host, sizeof(host) - 1);
    nlohmann::json j = {
        {"hostname", host},
        {"hardware_threads", std::thread::hardware_concurrency()},
        {"kernel_impl", kernels::impl_name(kernels::active_impl())},
        {"planners", options.planners},
        {"repeats", options.repeats},
        {"seed", options.seed},
        {"budget_s", options.params.time_budget},
        {"jobs", options.jobs},
        {"timestamp_unix",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    return j.dump(2);
}

std::vector<std::pair<std::string, ProblemInstance>> load_instance_dir(
    const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename().string().find(".path.") == std::string::npos)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, ProblemInstance>> out;
    out.reserve(files.size());
    for (const auto& f : files)
        out.emplace_back(f.stem().string(), instance_from_json(read_text_file(f), f.parent_path()));
    return out;
}

}  // namespace sirrt

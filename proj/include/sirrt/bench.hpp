#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sirrt/planner.hpp"
#include "sirrt/scene.hpp"

namespace sirrt {

struct BenchRecord {
    std::string instance_id;
    int k = 0;
    std::string planner;
    int repeat = 0;
    std::uint64_t seed = 0;
    bool success = false;
    bool validated = false;  // success paths are re-validated at the grid frequency
    double runtime_s = 0.0;
    double index_build_s = 0.0;
    double t_arrival = -1.0;
    double t_arrival_raw = -1.0;
    long iterations = 0;
    std::size_t nodes_start = 0;
    std::size_t nodes_goal = 0;
    long interval_queries = 0;
};

struct BenchOptions {
    std::vector<std::string> planners{"si-rrt", "st-baseline"};
    int repeats = 10;
    std::uint64_t seed = 1;
    PlannerParams params;
    int jobs = 1;
    std::filesystem::path paths_dir;  // empty: do not write per-run path files
};

struct BenchSummaryRow {
    int k = 0;
    std::string planner;
    int attempts = 0;
    int successes = 0;
    // quartiles over the runs solved by every benchmarked planner
    double runtime_q25 = 0.0, runtime_median = 0.0, runtime_q75 = 0.0;
    double arrival_q25 = 0.0, arrival_median = 0.0, arrival_q75 = 0.0;
    int mutually_solved = 0;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    std::vector<BenchSummaryRow> summary;
};

/// One run per (instance, planner, repeat). Runs are independent and may be
/// executed in parallel (jobs > 1); record order is deterministic either way.
BenchResult run_bench(const std::vector<std::pair<std::string, ProblemInstance>>& instances,
                      const BenchOptions& options);

std::string records_to_csv(const std::vector<BenchRecord>& records);
std::string summary_to_text(const std::vector<BenchSummaryRow>& summary);

/// Host/context sidecar (hostname, cores, kernel implementation, options);
/// written next to the CSV so the records themselves stay reproducible.
std::string bench_metadata_json(const BenchOptions& options);

/// Loads every *.json in the directory, sorted by filename.
std::vector<std::pair<std::string, ProblemInstance>> load_instance_dir(
    const std::filesystem::path& dir);

}  // namespace sirrt

#pragma once

#include <filesystem>
#include <string>

#include "sirrt/path.hpp"
#include "sirrt/planner.hpp"
#include "sirrt/scene.hpp"
#include "sirrt/validate.hpp"

namespace sirrt {

/// JSON (de)serialization of the interchange formats: robot models,
/// problem instances, timed paths, and validation reports. Parsing throws
/// std::runtime_error with a field-qualified message on malformed input.

std::string robot_to_json(const RobotModel& model);
RobotModel robot_from_json(const std::string& text);

std::string instance_to_json(const ProblemInstance& instance);
/// `base_dir` resolves a "robot_file" reference, when present.
ProblemInstance instance_from_json(const std::string& text,
                                   const std::filesystem::path& base_dir = {});

struct PathFile {
    TimedPath path;
    std::string planner = "si-rrt";
    std::uint64_t seed = 0;
    PlannerParams params;
    PlanStats stats;
};

std::string path_to_json(const PathFile& file);
PathFile path_from_json(const std::string& text);

std::string report_to_json(const ValidationReport& report, double frequency);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sirrt

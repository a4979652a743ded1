#pragma once

#include <string>
#include <vector>

#include "geotransfer/planner.hpp"

namespace geotransfer {

/// A transfer problem with its planner settings, as stored in a scenario file.
struct Scenario {
  std::string name;
  std::string body_name;
  Problem problem;
  PlannerConfig planner;       // coarse-to-fine
  PlannerConfig refine_only;   // planner with the refine-only overrides applied

  const PlannerConfig& config(Mode mode) const {
    return mode == Mode::RefineOnly ? refine_only : planner;
  }
};

/// Everything `solve` reports. Wall time is kept apart so reports compare equal
/// across runs.
struct SolutionReport {
  std::string scenario;
  GravityModel model;
  Mode mode = Mode::CoarseToFine;
  PlannerConfig config;
  TransferSolution best;
  std::vector<TransferSolution> coarse;
  SearchDiagnostics diagnostics;
  double wall_seconds = 0.0;
};

/// Parses a scenario document. InputError names the offending field or JSON line.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string format_scenario(const Scenario& scenario);

std::string format_report(const SolutionReport& report);
SolutionReport parse_report(const std::string& text);
SolutionReport load_report(const std::string& path);

/// Rows are initial-orbit fractions, columns target-orbit fractions; NaN cells empty.
std::string contour_csv(const Eigen::MatrixXd& grid);
/// Axis metadata and grid minimum for a contour export.
std::string contour_metadata(const std::string& scenario, const Eigen::MatrixXd& grid);
/// Header t,x,y,z,vx,vy,vz then one row per sample.
std::string trajectory_csv(const Trajectory& trajectory);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string to_string(Backend backend);
std::string to_string(Mode mode);
Backend parse_backend(const std::string& text);
Mode parse_mode(const std::string& text);

}  // namespace geotransfer

// geotransfer: solve, contour and trajectory export for bundled transfer scenarios.
//
// Exit codes: 0 success, 1 malformed input or any other error, 2 no feasible transfer.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "geotransfer/errors.hpp"
#include "geotransfer/scenario.hpp"

using namespace geotransfer;

namespace {

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file_atomic(out, content);
  }
}

void configure_threads() {
  const char* env = std::getenv("GEOTRANSFER_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw InputError("GEOTRANSFER_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

struct SolveArgs {
  std::string scenario;
  std::optional<std::string> backend;
  std::string mode = "coarse-to-fine";
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  const Scenario sc = load_scenario(a.scenario);
  const Mode mode = parse_mode(a.mode);
  PlannerConfig cfg = sc.config(mode);
  if (a.backend) cfg.backend = parse_backend(*a.backend);
  if (a.seed) cfg.seed = *a.seed;

  const auto t0 = std::chrono::steady_clock::now();
  const PlanResult plan = solve(sc.problem, cfg, mode);
  const auto t1 = std::chrono::steady_clock::now();

  SolutionReport report;
  report.scenario = sc.name;
  report.model = sc.problem.model;
  report.mode = mode;
  report.config = cfg;
  report.best = plan.best;
  report.coarse = plan.coarse;
  report.diagnostics = plan.diagnostics;
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  emit(a.out, format_report(report));
  std::cerr << sc.name << ": total_dv " << plan.best.total_dv << " km/s\n";
  return 0;
}

int run_contour(const std::string& scenario, int resolution, const std::string& out) {
  const Scenario sc = load_scenario(scenario);
  if (sc.planner.backend != Backend::Ellipse)
    throw InputError(scenario + ": contour export needs an ellipse-backend scenario");
  if (resolution < 2) throw InputError("--resolution must be >= 2");
  const TransferGeometry geometry(sc.problem, sc.planner);
  const Eigen::MatrixXd grid = contour_grid(geometry, sc.planner, resolution, resolution);
  write_file_atomic(out, contour_csv(grid));
  write_file_atomic(out + ".json", contour_metadata(sc.name, grid));
  return 0;
}

int run_trajectory(const std::string& solution, int n, const std::string& out) {
  const SolutionReport report = load_report(solution);
  if (report.best.curve.size() < 2) throw InputError(solution + ": report has no solution curve");
  if (n < 2) throw InputError("--n must be >= 2");
  emit(out, trajectory_csv(reconstruct_states(report.model, report.best, n)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-impulse two-impulse phase-free orbit transfers"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Run the planner and write a JSON report");
  solve_cmd->add_option("--scenario", solve_args.scenario, "Scenario JSON file")->required();
  solve_cmd->add_option("--backend", solve_args.backend, "ellipse or heatflow");
  solve_cmd->add_option("--mode", solve_args.mode, "coarse-to-fine or refine-only");
  solve_cmd->add_option("--seed", solve_args.seed, "Optimizer seed");
  solve_cmd->add_option("--out", solve_args.out, "Report path (stdout if omitted)");

  std::string contour_scenario, contour_out;
  int resolution = 0;
  auto* contour_cmd = app.add_subcommand("contour", "Write an N x N optimal-impulse grid");
  contour_cmd->add_option("--scenario", contour_scenario, "Scenario JSON file")->required();
  contour_cmd->add_option("--resolution", resolution, "Grid size N")->required();
  contour_cmd->add_option("--out", contour_out, "CSV path; metadata goes to <out>.json")
      ->required();

  std::string solution_path, trajectory_out;
  int samples = 200;
  auto* traj_cmd = app.add_subcommand("trajectory", "Export a timed trajectory from a report");
  traj_cmd->add_option("--solution", solution_path, "Report JSON file")->required();
  traj_cmd->add_option("--n", samples, "Number of samples");
  traj_cmd->add_option("--out", trajectory_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    configure_threads();
    if (*solve_cmd) return run_solve(solve_args);
    if (*contour_cmd) return run_contour(contour_scenario, resolution, contour_out);
    return run_trajectory(solution_path, samples, trajectory_out);
  } catch (const EmptyResultError& e) {
    std::cerr << "geotransfer: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "geotransfer: " << e.what() << "\n";
    return 1;
  }
}

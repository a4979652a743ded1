#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "geotransfer/scenario.hpp"
#include "support.hpp"

using namespace geotransfer;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const std::string kDir = GEOTRANSFER_SCENARIO_DIR;
const std::string kCli = GEOTRANSFER_CLI;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("geotransfer_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + kCli + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string without_timing(std::string text) {
  SolutionReport r = parse_report(text);
  r.wall_seconds = 0.0;
  return format_report(r);
}

std::vector<std::vector<double>> read_numbers(const std::string& path, bool header) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  if (header) std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve is reproducible and exports a trajectory") {
  TempDir tmp;
  const std::string scenario = kDir + "/leo_heo.json";
  REQUIRE(run("solve --scenario " + scenario + " --seed 3 --out " + (tmp / "a.json")) == 0);
  REQUIRE(run("solve --scenario " + scenario + " --seed 3 --out " + (tmp / "b.json")) == 0);
  const std::string a = read_file(tmp / "a.json"), b = read_file(tmp / "b.json");
  CHECK(without_timing(a) == without_timing(b));
  CHECK(a.find("\"timing\"") != std::string::npos);

  const SolutionReport r = parse_report(a);
  CHECK(r.best.total_dv == doctest::Approx(6.552653).epsilon(5e-4 / 6.552653));
  CHECK(r.config.seed == 3);
  CHECK(r.scenario == "leo_heo");

  REQUIRE(run("trajectory --solution " + (tmp / "a.json") + " --n 200 --out " + (tmp / "t.csv")) == 0);
  CHECK(read_file(tmp / "t.csv").rfind("t,x,y,z,vx,vy,vz\n", 0) == 0);
  const auto rows = read_numbers(tmp / "t.csv", true);
  REQUIRE(rows.size() == 200);
  const Vec3 p0 = r.best.p0, pf = r.best.pf;
  CHECK((Vec3(rows[0][1], rows[0][2], rows[0][3]) - p0).norm() <= 1e-9);
  const auto& last = rows.back();
  CHECK((Vec3(last[1], last[2], last[3]) - pf).norm() <= 1e-3 * (pf - p0).norm());
  for (const auto& row : rows) {
    const Vec3 pos(row[1], row[2], row[3]), vel(row[4], row[5], row[6]);
    CHECK(rel(vel.squaredNorm(), 2 * (r.best.energy - potential(r.model, pos))) <= 1e-9);
  }
  // the first exported state flown for the exported time lands on the last
  const OrbitState start{Vec3(rows[0][1], rows[0][2], rows[0][3]), Vec3(rows[0][4], rows[0][5], rows[0][6])};
  const OrbitState end = propagate(r.model, start, last[0], 1e-12);
  CHECK((end.r - pf).norm() <= 1e-3 * (pf - p0).norm());
}

TEST_CASE("refine-only mode and backend override") {
  TempDir tmp;
  REQUIRE(run("solve --scenario " + kDir + "/gto_rgeo.json --mode refine-only --out " + (tmp / "r.json")) == 0);
  const SolutionReport r = load_report(tmp / "r.json");
  CHECK(r.mode == Mode::RefineOnly);
  CHECK(r.config.population_size == 50);
  CHECK_FALSE(r.config.use_mbh);
  CHECK(r.coarse.empty());
  CHECK(run("solve --scenario " + kDir + "/jupiter_io.json --backend ellipse --out " + (tmp / "x.json")) == 1);
  CHECK_FALSE(fs::exists(tmp / "x.json"));
}

TEST_CASE("contour export") {
  TempDir tmp;
  // 361 points per orbit include every coarse sample of the 90-per-orbit search
  REQUIRE(run("contour --scenario " + kDir + "/leo_heo.json --resolution 361 --out " + (tmp / "c.csv")) == 0);
  const auto grid = read_numbers(tmp / "c.csv", false);
  REQUIRE(grid.size() == 361);
  double lo = 1e300;
  for (const auto& row : grid) {
    REQUIRE(row.size() == 361);
    for (double v : row)
      if (!std::isnan(v)) lo = std::min(lo, v);
  }
  const Scenario leo = load_scenario(kDir + "/leo_heo.json");
  const CoarseResult coarse = coarse_search(TransferGeometry(leo.problem, leo.planner), leo.planner);
  CHECK(lo <= coarse.best.front().total_dv + 1e-12);
  for (std::size_t j = 0; j < 361; ++j) {
    CHECK(grid.front()[j] == grid.back()[j]);
    CHECK(grid[j].front() == grid[j].back());
  }
  const std::string meta = read_file(tmp / "c.csv.json");
  CHECK(meta.find("\"argmin\"") != std::string::npos);
  CHECK(meta.find("\"count\": 361") != std::string::npos);
  CHECK(run("contour --scenario " + kDir + "/jupiter_io.json --resolution 10 --out " + (tmp / "j.csv")) == 1);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  write_file_atomic(tmp / "bad.json", "{\n  \"name\": \"bad\",\n  \"body\": \n}\n");
  CHECK(run("solve --scenario " + (tmp / "bad.json")) == 1);
  const std::string diag = tmp / "diag.txt";
  std::system((kCli + " solve --scenario " + (tmp / "bad.json") + " 2>" + diag).c_str());
  CHECK(read_file(diag).find("line 4") != std::string::npos);

  std::string text = read_file(kDir + "/leo_heo.json");
  text.replace(text.find("\"n_best\""), 8, "\"n_bets\"");
  write_file_atomic(tmp / "typo.json", text);
  std::system((kCli + " solve --scenario " + (tmp / "typo.json") + " 2>" + diag).c_str());
  CHECK(read_file(diag).find("planner.n_bets") != std::string::npos);
  CHECK(run("solve --scenario " + (tmp / "typo.json")) == 1);

  Scenario s = load_scenario(kDir + "/leo_heo.json");
  s.planner.backend = Backend::Heatflow;
  s.planner.n_pos_samples = 3;
  s.planner.n_energy_samples = 1;
  s.planner.coarse_flow.max_steps = 1;
  write_file_atomic(tmp / "empty.json", format_scenario(s));
  CHECK(run("solve --scenario " + (tmp / "empty.json")) == 2);

  CHECK(run("solve --scenario " + kDir + "/missing.json") == 1);
  CHECK(run("solve --scenario " + kDir + "/leo_heo.json --mode fast") == 1);
  CHECK(run("solve --frobnicate") == 1);
  CHECK(run("") == 1);
  CHECK(run("solve --scenario " + kDir + "/leo_heo.json --out " + (tmp / "o.json"),
            "GEOTRANSFER_THREADS=zero") == 1);
  CHECK(run("solve --scenario " + kDir + "/leo_heo.json --out " + (tmp / "o.json"),
            "GEOTRANSFER_THREADS=2") == 0);
  CHECK(run("trajectory --solution " + (tmp / "bad.json")) == 1);
}

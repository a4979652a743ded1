#include "geotransfer/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "geotransfer/errors.hpp"

namespace geotransfer {

using json = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("field '" + path + "': " + what);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": malformed JSON");
  }
}

// Strict view of one JSON object: every key read is recorded, and finish() rejects the rest.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.push_back(key);
    if (!j_.contains(key)) fail(join(path_, key), "missing");
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    return v.get<double>();
  }

  // Non-finite doubles are stored as null.
  double number_or_nan(const std::string& key) {
    const json& v = at(key);
    if (v.is_null()) return std::nan("");
    if (!v.is_number()) fail(path(key), "expected a number");
    return v.get<double>();
  }

  long integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    return v.get<long>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) fail(path(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const json& v = at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::ptrdiff_t size = -1) {
    const json& v = at(key);
    if (!v.is_array()) fail(path(key), "expected an array of numbers");
    if (size >= 0 && static_cast<std::ptrdiff_t>(v.size()) != size)
      fail(path(key), "expected " + std::to_string(size) + " numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Vec3 vec3(const std::string& key) {
    const auto v = numbers(key, 3);
    return {v[0], v[1], v[2]};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const auto& s : seen_) known = known || s == key;
      if (!known) fail(join(path_, key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

json number_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string kind_name(GravityKind kind) {
  switch (kind) {
    case GravityKind::Kepler:
      return "kepler";
    case GravityKind::J2:
      return "j2";
    case GravityKind::ForceFree:
      return "force_free";
  }
  return "kepler";
}

GravityKind parse_kind(const std::string& text, const std::string& path) {
  if (text == "kepler") return GravityKind::Kepler;
  if (text == "j2") return GravityKind::J2;
  fail(path, "expected \"kepler\" or \"j2\", got \"" + text + "\"");
}

json flow_json(const HeatFlowConfig& f) {
  return {{"n_nodes", f.n_nodes},           {"residual_tol", f.residual_tol},
          {"max_flow_time", f.max_flow_time}, {"ode_tol", f.ode_tol},
          {"max_steps", f.max_steps},       {"stall_steps", f.stall_steps}};
}

// Keys absent from `j` keep the values already in `f`.
void read_flow(const json& j, const std::string& path, HeatFlowConfig& f) {
  Fields in(j, path);
  if (in.has("n_nodes")) f.n_nodes = static_cast<int>(in.integer("n_nodes"));
  if (in.has("residual_tol")) f.residual_tol = in.number("residual_tol");
  if (in.has("max_flow_time")) f.max_flow_time = in.number("max_flow_time");
  if (in.has("ode_tol")) f.ode_tol = in.number("ode_tol");
  if (in.has("max_steps")) f.max_steps = static_cast<int>(in.integer("max_steps"));
  if (in.has("stall_steps")) f.stall_steps = static_cast<int>(in.integer("stall_steps"));
  in.finish();
}

json planner_json(const PlannerConfig& c) {
  return {{"backend", to_string(c.backend)},
          {"n_pos_samples", c.n_pos_samples},
          {"n_energy_samples", c.n_energy_samples},
          {"n_periods", c.n_periods},
          {"n_best", c.n_best},
          {"multiplier", c.multiplier},
          {"refine_generations", c.refine_generations},
          {"population_size", c.population_size},
          {"refine_tol", c.refine_tol},
          {"use_mbh", c.use_mbh},
          {"mbh_max_step", c.mbh_max_step},
          {"mbh_patience", c.mbh_patience},
          {"seed", c.seed},
          {"coarse_flow", flow_json(c.coarse_flow)},
          {"refine_flow", flow_json(c.refine_flow)}};
}

void read_planner(const json& j, const std::string& path, PlannerConfig& c) {
  Fields in(j, path);
  auto int_field = [&](const char* key, int& out) {
    if (in.has(key)) out = static_cast<int>(in.integer(key));
  };
  if (in.has("backend")) {
    try {
      c.backend = parse_backend(in.string("backend"));
    } catch (const InputError& e) {
      fail(in.path("backend"), e.what());
    }
  }
  int_field("n_pos_samples", c.n_pos_samples);
  int_field("n_energy_samples", c.n_energy_samples);
  int_field("n_periods", c.n_periods);
  int_field("n_best", c.n_best);
  if (in.has("multiplier")) c.multiplier = in.number("multiplier");
  int_field("refine_generations", c.refine_generations);
  int_field("population_size", c.population_size);
  if (in.has("refine_tol")) c.refine_tol = in.number("refine_tol");
  if (in.has("use_mbh")) c.use_mbh = in.boolean("use_mbh");
  if (in.has("mbh_max_step")) c.mbh_max_step = in.number("mbh_max_step");
  int_field("mbh_patience", c.mbh_patience);
  if (in.has("seed")) c.seed = in.unsigned_integer("seed");
  if (in.has("coarse_flow")) read_flow(in.at("coarse_flow"), in.path("coarse_flow"), c.coarse_flow);
  if (in.has("refine_flow")) read_flow(in.at("refine_flow"), in.path("refine_flow"), c.refine_flow);
  in.finish();
  try {
    c.validate();
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

json state_json(const OrbitState& s) { return {{"r", vec_json(s.r)}, {"v", vec_json(s.v)}}; }

OrbitState read_state(const json& j, const std::string& path) {
  Fields in(j, path);
  OrbitState s{in.vec3("r"), in.vec3("v")};
  in.finish();
  return s;
}

json model_json(const GravityModel& m) {
  return {{"kind", kind_name(m.kind)},
          {"mu", m.body.mu},
          {"j2", m.body.j2},
          {"r_body", m.body.r_body}};
}

GravityModel read_model(const json& j, const std::string& path) {
  Fields in(j, path);
  GravityModel m;
  m.kind = parse_kind(in.string("kind"), in.path("kind"));
  m.body = {in.number("mu"), in.number("j2"), in.number("r_body")};
  in.finish();
  return m;
}

json diagnostics_json(const SearchDiagnostics& d) {
  return {{"pairs", d.pairs},
          {"candidates", d.candidates},
          {"degenerate", d.degenerate},
          {"hill_violations", d.hill_violations},
          {"nonconverged", d.nonconverged},
          {"failed", d.failed},
          {"refine_evaluations", d.refine_evaluations}};
}

SearchDiagnostics read_diagnostics(const json& j, const std::string& path) {
  Fields in(j, path);
  SearchDiagnostics d;
  d.pairs = in.integer("pairs");
  d.candidates = in.integer("candidates");
  d.degenerate = in.integer("degenerate");
  d.hill_violations = in.integer("hill_violations");
  d.nonconverged = in.integer("nonconverged");
  d.failed = in.integer("failed");
  d.refine_evaluations = in.integer("refine_evaluations");
  in.finish();
  return d;
}

json solution_json(const TransferSolution& s) {
  json nodes = json::array();
  for (const auto& p : s.curve.nodes) nodes.push_back(vec_json(p));
  return {{"total_dv", s.total_dv},
          {"dv0", vec_json(s.dv0)},
          {"dvf", vec_json(s.dvf)},
          {"tof", s.tof},
          {"branch", s.branch},
          {"energy", s.energy},
          {"sma", s.sma},
          {"residual", number_json(s.residual)},
          {"provenance", s.provenance == Provenance::Coarse ? "coarse" : "refined"},
          {"p0", vec_json(s.p0)},
          {"pf", vec_json(s.pf)},
          {"v0", vec_json(s.v0)},
          {"vf", vec_json(s.vf)},
          {"x", json::array({s.x(0), s.x(1), s.x(2), s.x(3)})},
          {"curve", {{"params", s.curve.params}, {"nodes", nodes}}}};
}

TransferSolution read_solution(const json& j, const std::string& path) {
  Fields in(j, path);
  TransferSolution s;
  s.total_dv = in.number("total_dv");
  s.dv0 = in.vec3("dv0");
  s.dvf = in.vec3("dvf");
  s.tof = in.number("tof");
  s.branch = static_cast<int>(in.integer("branch"));
  s.energy = in.number("energy");
  s.sma = in.number("sma");
  s.residual = in.number_or_nan("residual");
  const std::string prov = in.string("provenance");
  if (prov == "coarse") {
    s.provenance = Provenance::Coarse;
  } else if (prov == "refined") {
    s.provenance = Provenance::Refined;
  } else {
    fail(in.path("provenance"), "expected \"coarse\" or \"refined\"");
  }
  s.p0 = in.vec3("p0");
  s.pf = in.vec3("pf");
  s.v0 = in.vec3("v0");
  s.vf = in.vec3("vf");
  const auto x = in.numbers("x", 4);
  s.x = Eigen::Vector4d(x[0], x[1], x[2], x[3]);

  Fields curve(in.at("curve"), in.path("curve"));
  s.curve.params = curve.numbers("params");
  const json& nodes = curve.at("nodes");
  const std::string nodes_path = curve.path("nodes");
  if (!nodes.is_array()) fail(nodes_path, "expected an array of 3-vectors");
  for (const auto& node : nodes) {
    if (!node.is_array() || node.size() != 3) fail(nodes_path, "expected an array of 3-vectors");
    Vec3 p;
    for (int k = 0; k < 3; ++k) {
      if (!node[k].is_number()) fail(nodes_path, "expected an array of 3-vectors");
      p(k) = node[k].get<double>();
    }
    s.curve.nodes.push_back(p);
  }
  if (s.curve.nodes.size() != s.curve.params.size())
    fail(in.path("curve"), "params and nodes differ in length");
  curve.finish();
  in.finish();
  return s;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(Backend backend) {
  return backend == Backend::Ellipse ? "ellipse" : "heatflow";
}

std::string to_string(Mode mode) {
  return mode == Mode::CoarseToFine ? "coarse-to-fine" : "refine-only";
}

Backend parse_backend(const std::string& text) {
  if (text == "ellipse") return Backend::Ellipse;
  if (text == "heatflow") return Backend::Heatflow;
  throw InputError("unknown backend \"" + text + "\" (expected ellipse or heatflow)");
}

Mode parse_mode(const std::string& text) {
  if (text == "coarse-to-fine") return Mode::CoarseToFine;
  if (text == "refine-only") return Mode::RefineOnly;
  throw InputError("unknown mode \"" + text + "\" (expected coarse-to-fine or refine-only)");
}

Scenario parse_scenario(const std::string& text) {
  const json doc = parse_text(text);
  Fields in(doc, "");
  Scenario s;
  s.name = in.string("name");

  Fields body(in.at("body"), "body");
  s.body_name = body.string("name");
  s.problem.model.body = {body.number("mu"), body.has("j2") ? body.number("j2") : 0.0,
                          body.number("r_body")};
  body.finish();
  s.problem.model.kind = parse_kind(in.string("model"), "model");
  s.problem.initial = read_state(in.at("initial"), "initial");
  s.problem.target = read_state(in.at("target"), "target");

  if (in.has("planner")) read_planner(in.at("planner"), "planner", s.planner);
  s.refine_only = s.planner;
  s.refine_only.population_size = 50;
  s.refine_only.refine_generations = 5000;
  s.refine_only.use_mbh = false;
  if (in.has("refine_only")) read_planner(in.at("refine_only"), "refine_only", s.refine_only);
  in.finish();

  try {
    s.problem.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("scenario '") + s.name + "': " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_scenario(const Scenario& s) {
  json doc = {{"name", s.name},
              {"body",
               {{"name", s.body_name},
                {"mu", s.problem.model.body.mu},
                {"j2", s.problem.model.body.j2},
                {"r_body", s.problem.model.body.r_body}}},
              {"model", kind_name(s.problem.model.kind)},
              {"initial", state_json(s.problem.initial)},
              {"target", state_json(s.problem.target)},
              {"planner", planner_json(s.planner)},
              {"refine_only", planner_json(s.refine_only)}};
  return doc.dump(2) + "\n";
}

std::string format_report(const SolutionReport& r) {
  json coarse = json::array();
  for (const auto& c : r.coarse) coarse.push_back(solution_json(c));
  json doc = {{"scenario", r.scenario},
              {"mode", to_string(r.mode)},
              {"model", model_json(r.model)},
              {"solution", solution_json(r.best)},
              {"diagnostics", diagnostics_json(r.diagnostics)},
              {"config", planner_json(r.config)},
              {"coarse", coarse},
              {"timing", {{"wall_seconds", r.wall_seconds}}}};
  return doc.dump(2) + "\n";
}

SolutionReport parse_report(const std::string& text) {
  const json doc = parse_text(text);
  Fields in(doc, "");
  SolutionReport r;
  r.scenario = in.string("scenario");
  try {
    r.mode = parse_mode(in.string("mode"));
  } catch (const InputError& e) {
    fail("mode", e.what());
  }
  r.model = read_model(in.at("model"), "model");
  r.best = read_solution(in.at("solution"), "solution");
  r.diagnostics = read_diagnostics(in.at("diagnostics"), "diagnostics");
  read_planner(in.at("config"), "config", r.config);
  const json& coarse = in.at("coarse");
  if (!coarse.is_array()) fail("coarse", "expected an array");
  for (std::size_t i = 0; i < coarse.size(); ++i)
    r.coarse.push_back(read_solution(coarse[i], "coarse[" + std::to_string(i) + "]"));
  Fields timing(in.at("timing"), "timing");
  r.wall_seconds = timing.number("wall_seconds");
  timing.finish();
  in.finish();
  return r;
}

SolutionReport load_report(const std::string& path) {
  try {
    return parse_report(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string contour_csv(const Eigen::MatrixXd& grid) {
  std::string out;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_number(grid(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string contour_metadata(const std::string& scenario, const Eigen::MatrixXd& grid) {
  auto axis = [](const char* name, Eigen::Index n) {
    return json{{"name", name}, {"count", n}, {"start", 0.0}, {"stop", 1.0}};
  };
  json doc = {{"scenario", scenario},
              {"units", "km/s"},
              {"rows", axis("initial_true_anomaly_fraction", grid.rows())},
              {"columns", axis("target_true_anomaly_fraction", grid.cols())}};
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index bi = -1, bj = -1;
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.cols(); ++j)
      if (grid(i, j) < best) {
        best = grid(i, j);
        bi = i;
        bj = j;
      }
  if (bi < 0) {
    doc["min"] = nullptr;
    doc["argmin"] = nullptr;
  } else {
    doc["min"] = best;
    doc["argmin"] = {{"row", bi},
                     {"column", bj},
                     {"u0", static_cast<double>(bi) / (grid.rows() - 1)},
                     {"uf", static_cast<double>(bj) / (grid.cols() - 1)}};
  }
  return doc.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t,x,y,z,vx,vy,vz\n";
  for (std::size_t k = 0; k < trajectory.t.size(); ++k) {
    const auto& s = trajectory.states[k];
    out += format_number(trajectory.t[k]);
    for (int i = 0; i < 3; ++i) out += "," + format_number(s.r(i));
    for (int i = 0; i < 3; ++i) out += "," + format_number(s.v(i));
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace geotransfer

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "geotransfer/errors.hpp"
#include "geotransfer/planner.hpp"
#include "geotransfer/scenario.hpp"
#include "support.hpp"

using namespace geotransfer;
using namespace testing_support;

namespace {

const OrbitState kLeo{Vec3(3449.16114893, -2063.72624968, 5808.89565173),
                      Vec3(4.19600114, -4.65510855, -4.14528944)};
const OrbitState kHeo{Vec3(7132.67709309, 644.58087289, -698.32594990),
                      Vec3(-0.91780300, 9.52351726, -0.58384682)};
const OrbitState kGto{Vec3(4783.85656098, 4478.04491028, 74.45791683),
                      Vec3(-6.60516350, 7.11177002, -3.33974946)};
const OrbitState kRgeo{Vec3(30993.40736267, -28901.81993650, 0.0),
                       Vec3(-2.09161279, -2.24298010, 0.0)};

Problem leo_heo() { return {earth(), kLeo, kHeo}; }

Problem jupiter() {
  return {jupiter_j2(), {Vec3(75000.0, 0.0, 0.0), Vec3(0.0, 53.261749, 14.271442)},
          {Vec3(489943.356, 0.0, 0.0), Vec3(0.0, 16.112383, 1.406071e-2)}};
}

PlannerConfig small_ellipse(int n_pos = 30) {
  PlannerConfig cfg;
  cfg.n_pos_samples = n_pos;
  cfg.refine_generations = 200;
  return cfg;
}

PlannerConfig small_heatflow() {
  PlannerConfig cfg;
  cfg.backend = Backend::Heatflow;
  cfg.n_pos_samples = 5;
  cfg.n_energy_samples = 2;
  cfg.coarse_flow.n_nodes = 13;
  return cfg;
}

double hohmann_dv(double mu, double r1, double r2) {
  return std::sqrt(mu / r1) * (std::sqrt(2 * r2 / (r1 + r2)) - 1) +
         std::sqrt(mu / r2) * (1 - std::sqrt(2 * r1 / (r1 + r2)));
}

// Exact scalar/vector equality of two solutions.
void check_same(const TransferSolution& a, const TransferSolution& b) {
  CHECK(a.total_dv == b.total_dv);
  CHECK(a.x == b.x);
  CHECK(a.branch == b.branch);
  CHECK(a.energy == b.energy);
  CHECK(a.dv0 == b.dv0);
  CHECK(a.dvf == b.dvf);
  CHECK(a.tof == b.tof);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t k = 0; k < a.curve.size(); ++k) CHECK(a.curve.nodes[k] == b.curve.nodes[k]);
}

void check_energy_identity(const GravityModel& model, const TransferSolution& sol) {
  const Trajectory tr = reconstruct_states(model, sol, 200);
  for (const auto& s : tr.states)
    CHECK(rel(s.v.squaredNorm(), 2 * (sol.energy - potential(model, s.r))) <= 1e-9);
}

}  // namespace

TEST_CASE("energy bounds") {
  const Vec3 p0(1e4, 0, 0), pf(-1e4, 0, 0);
  for (auto backend : {Backend::Ellipse, Backend::Heatflow}) {
    const auto [lo, hi] = energy_bounds(backend, kEarthMu, p0, pf, 2.0);
    CHECK(lo == doctest::Approx(-19.93).epsilon(1e-12));
    CHECK(hi == doctest::Approx(-9.965).epsilon(1e-12));
  }
  const Vec3 q(7000, 1000, 0), r(-3000, 20000, 500);
  const auto [lo, hi] = energy_bounds(Backend::Ellipse, kEarthMu, q, r, 1.5);
  CHECK(lo == -kEarthMu / (2 * a_min(q, r)));
  CHECK(lo < hi);
}

TEST_CASE("decision vectors round trip") {
  for (auto backend : {Backend::Ellipse, Backend::Heatflow}) {
    const int branches = backend == Backend::Ellipse ? 4 : 2;
    for (int b = 0; b < branches; ++b) {
      const Decision d{0.125, 0.75, 0.4, b};
      const Decision e = decode(backend, encode(backend, d));
      CHECK(e.u0 == d.u0);
      CHECK(e.uf == d.uf);
      CHECK(e.w == d.w);
      CHECK(e.branch == b);
    }
  }
  CHECK(decode(Backend::Ellipse, Eigen::Vector4d(0, 0, 0, 1.0)).branch == 3);
  CHECK(decode(Backend::Heatflow, Eigen::Vector4d(0, 0, 0, 1.0)).branch == 1);
}

TEST_CASE("configuration validation") {
  PlannerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.multiplier = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.mbh_max_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.n_best = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_THROWS_AS(TransferGeometry(jupiter(), PlannerConfig{}), DomainError);
}

TEST_CASE("coarse search is optimal over the sample set") {
  const PlannerConfig cfg = small_ellipse(30);
  const TransferGeometry g(leo_heo(), cfg);
  const CoarseResult coarse = coarse_search(g, cfg);

  // Brute force over the same grid, written independently of the kernel.
  std::vector<double> all;
  long candidates = 0;
  const auto& a = g.initial().samples();
  const auto& b = g.target().samples();
  for (const auto& s0 : a)
    for (const auto& sf : b) {
      if (s0.r.cross(sf.r).norm() <= 1e-12 * s0.r.norm() * sf.r.norm()) continue;
      for (int k = 0; k < cfg.n_energy_samples; ++k) {
        const double a_k = a_min(s0.r, sf.r) * (1.0 + (cfg.multiplier - 1.0) * k / (cfg.n_energy_samples - 1));
        for (const auto& t : solve_transfer_ellipses(kEarthMu, s0.r, sf.r, a_k)) {
          ++candidates;
          all.push_back((velocity_at(t, kEarthMu, s0.r) - s0.v).norm() +
                        (sf.v - velocity_at(t, kEarthMu, sf.r)).norm());
        }
      }
    }
  std::sort(all.begin(), all.end());
  REQUIRE(coarse.best.size() == 5);
  CHECK(coarse.diagnostics.pairs == 30L * 30 * 3);
  CHECK(coarse.diagnostics.candidates == candidates);
  for (int k = 0; k < 5; ++k) CHECK(coarse.best[k].total_dv == doctest::Approx(all[k]).epsilon(1e-12));
  for (int k = 0; k + 1 < 5; ++k) CHECK(coarse.best[k].total_dv <= coarse.best[k + 1].total_dv);
}

TEST_CASE("sample count at the tuned resolution") {
  const PlannerConfig cfg;
  const TransferGeometry g(leo_heo(), cfg);
  const CoarseResult coarse = coarse_search(g, cfg);
  const long pairs = 90L * 90 * 3;
  CHECK(coarse.diagnostics.pairs == pairs);
  // two traversal directions per pair give the 48,600 ellipse samples; the extra
  // vacant focus adds up to two more per pair
  CHECK(2 * pairs == 48600);
  CHECK(coarse.diagnostics.candidates + 2 * coarse.diagnostics.degenerate >= 2 * pairs);
  CHECK(coarse.diagnostics.candidates <= 4 * pairs);
  CHECK(coarse.diagnostics.candidates == 84684);
}

TEST_CASE("coarse hohmann within two percent") {
  const double r1 = 6678.0, r2 = 42164.0;
  const Problem p{earth(), circular(kEarthMu, r1), circular(kEarthMu, r2)};
  const PlannerConfig cfg;
  const TransferGeometry g(p, cfg);
  const CoarseResult coarse = coarse_search(g, cfg);
  const double exact = hohmann_dv(kEarthMu, r1, r2);
  CHECK(coarse.best.front().total_dv >= exact * (1 - 1e-12));
  CHECK(coarse.best.front().total_dv <= 1.02 * exact);
}

TEST_CASE("transfer between identical orbits costs nothing") {
  const Problem p{earth(), kHeo, kHeo};
  const PlanResult r = solve(p, small_ellipse(30), Mode::CoarseToFine);
  CHECK(r.best.total_dv <= 1e-6);
}

TEST_CASE("coasting along the initial orbit needs no impulse") {
  const OrbitTrack track(earth(), kLeo, 1, 8);
  const OrbitState s0 = track.state_at(0.1), s1 = track.state_at(0.35);
  const double a = sma_of_energy(kEarthMu, specific_energy(earth(), kLeo));
  double best = 1e9;
  for (const auto& t : solve_transfer_ellipses(kEarthMu, s0.r, s1.r, a)) {
    const TransferSolution sol = evaluate_dv(s0, s1, t, kEarthMu);
    CHECK(sol.total_dv == sol.dv0.norm() + sol.dvf.norm());
    best = std::min(best, std::max(sol.dv0.norm(), sol.dvf.norm()));
  }
  CHECK(best <= 1e-9);
}

TEST_CASE("ellipse and heat flow agree on the same transfer") {
  const OrbitTrack a(earth(), kLeo, 1, 12), b(earth(), kHeo, 1, 12);
  const OrbitState s0 = a.samples()[2], sf = b.samples()[5];
  const double sma = 1.3 * a_min(s0.r, sf.r);
  const JacobiMetric m(earth(), energy_of_sma(kEarthMu, sma));
  HeatFlowConfig cfg{30, 1e-10};
  cfg.max_steps = 2000;
  const GeodesicResult geo = flow_to_geodesic(m, s0.r, sf.r, Homotopy::Direct, cfg);
  REQUIRE(geo.converged);
  const TransferSolution hf = evaluate_dv(s0, sf, geo, earth());

  double closest = 1e300;
  double ellipse_dv = 0.0;
  for (const auto& t : solve_transfer_ellipses(kEarthMu, s0.r, sf.r, sma)) {
    const DiscreteCurve c = to_discrete_curve(t, 30);
    double dev = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) dev = std::max(dev, (c.nodes[k] - geo.curve.nodes[k]).norm());
    if (dev < closest) {
      closest = dev;
      ellipse_dv = evaluate_dv(s0, sf, t, kEarthMu).total_dv;
    }
  }
  CHECK(closest <= 1e-3 * (sf.r - s0.r).norm());
  CHECK(std::abs(hf.total_dv - ellipse_dv) <= 1e-3);
}

TEST_CASE("time of flight oracles") {
  SUBCASE("circular arc") {
    const double r = 9000.0, theta = 1.1;
    EllipseTransfer t;
    t.a = r;
    t.h_hat = Vec3::UnitZ();
    t.p0 = Vec3(r, 0, 0);
    t.pf = Vec3(r * std::cos(theta), r * std::sin(theta), 0);
    TransferSolution sol;
    sol.curve = to_discrete_curve(t, 40);
    sol.energy = energy_of_sma(kEarthMu, r);
    const Trajectory tr = reconstruct_states(earth(), sol, 50);
    CHECK(rel(tr.tof, theta * std::sqrt(r * r * r / kEarthMu)) <= 1e-9);
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == tr.tof);
    for (std::size_t k = 0; k + 1 < tr.t.size(); ++k) CHECK(tr.t[k] < tr.t[k + 1]);
  }
  SUBCASE("hohmann half ellipse") {
    const double r1 = 6678.0, r2 = 42164.0;
    EllipseTransfer t;
    t.a = 0.5 * (r1 + r2);
    t.e_vec = Vec3((r2 - r1) / (r1 + r2), 0, 0);
    t.h_hat = Vec3::UnitZ();
    t.p0 = Vec3(r1, 0, 0);
    t.pf = Vec3(-r2, 0, 0);
    TransferSolution sol;
    sol.curve = to_discrete_curve(t, 120);
    sol.energy = energy_of_sma(kEarthMu, t.a);
    const Trajectory tr = reconstruct_states(earth(), sol, 200);
    CHECK(rel(tr.tof, M_PI * std::sqrt(std::pow(t.a, 3) / kEarthMu)) <= 1e-6);
  }
}

TEST_CASE("leo to heo: refined solution is consistent") {
  const PlannerConfig cfg;
  const PlanResult r = solve(leo_heo(), cfg, Mode::CoarseToFine);
  const TransferSolution& best = r.best;
  CHECK(best.provenance == Provenance::Refined);
  CHECK(best.total_dv <= r.coarse.front().total_dv);
  CHECK(best.total_dv == best.dv0.norm() + best.dvf.norm());
  CHECK(best.residual <= 1e-8);
  const TransferGeometry g(leo_heo(), cfg);
  const Decision d = decode(cfg.backend, best.x);
  const OrbitState s0 = g.initial().state_at(d.u0), sf = g.target().state_at(d.uf);
  CHECK((best.dv0 - (best.v0 - s0.v)).norm() <= 1e-12);
  CHECK((best.dvf - (sf.v - best.vf)).norm() <= 1e-12);
  check_energy_identity(earth(), best);
  CHECK(propagation_miss(earth(), best) <= 1e-3 * (best.pf - best.p0).norm());
  const Trajectory tr = reconstruct_states(earth(), best, 200);
  CHECK(rel(tr.tof, best.tof) <= 1e-12);
}

TEST_CASE("refinement never loses to its best seed") {
  for (const Problem& p : {leo_heo(), Problem{earth(), kGto, kRgeo}}) {
    PlannerConfig cfg = small_ellipse(20);
    cfg.refine_generations = 30;
    const TransferGeometry g(p, cfg);
    const CoarseResult coarse = coarse_search(g, cfg);
    const RefineResult r = refine(g, cfg, coarse.best);
    CHECK(r.best.total_dv <= coarse.best.front().total_dv);
    CHECK(r.evaluations > 0);
  }
  const PlannerConfig hf = small_heatflow();
  const TransferGeometry g(leo_heo(), hf);
  const CoarseResult coarse = coarse_search(g, hf);
  PlannerConfig quick = hf;
  quick.refine_generations = 3;
  quick.mbh_patience = 1;
  const RefineResult r = refine(g, quick, coarse.best);
  CHECK(r.best.total_dv <= coarse.best.front().total_dv);
}

TEST_CASE("fixed seed gives identical results") {
  PlannerConfig cfg = small_ellipse(20);
  cfg.seed = 17;
  const PlanResult a = solve(leo_heo(), cfg, Mode::CoarseToFine);
  const PlanResult b = solve(leo_heo(), cfg, Mode::CoarseToFine);
  check_same(a.best, b.best);
  CHECK(a.diagnostics == b.diagnostics);
  REQUIRE(a.coarse.size() == b.coarse.size());
  for (std::size_t k = 0; k < a.coarse.size(); ++k) check_same(a.coarse[k], b.coarse[k]);
  cfg.population_size = 30;
  const PlanResult c = solve(leo_heo(), cfg, Mode::RefineOnly);
  const PlanResult d = solve(leo_heo(), cfg, Mode::RefineOnly);
  check_same(c.best, d.best);
}

TEST_CASE("parallel kernels reproduce the serial reference bit for bit") {
  omp_set_num_threads(4);
  SUBCASE("coarse search, ellipse") {
    const PlannerConfig cfg = small_ellipse(40);
    const TransferGeometry g(Problem{earth(), kGto, kRgeo}, cfg);
    const CoarseResult par = coarse_search(g, cfg), ser = coarse_search_serial(g, cfg);
    CHECK(par.diagnostics == ser.diagnostics);
    REQUIRE(par.best.size() == ser.best.size());
    for (std::size_t k = 0; k < par.best.size(); ++k) check_same(par.best[k], ser.best[k]);
  }
  SUBCASE("coarse search, heat flow under j2") {
    const PlannerConfig cfg = small_heatflow();
    const TransferGeometry g(jupiter(), cfg);
    const CoarseResult par = coarse_search(g, cfg), ser = coarse_search_serial(g, cfg);
    CHECK(par.diagnostics == ser.diagnostics);
    REQUIRE(par.best.size() == ser.best.size());
    for (std::size_t k = 0; k < par.best.size(); ++k) check_same(par.best[k], ser.best[k]);
  }
  SUBCASE("contour grid") {
    const PlannerConfig cfg;
    const TransferGeometry g(leo_heo(), cfg);
    const Eigen::MatrixXd par = contour_grid(g, cfg, 24, 20), ser = contour_grid_serial(g, cfg, 24, 20);
    CHECK(par.rows() == 24);
    CHECK(par.cols() == 20);
    for (Eigen::Index i = 0; i < par.rows(); ++i)
      for (Eigen::Index j = 0; j < par.cols(); ++j)
        CHECK((par(i, j) == ser(i, j) || (std::isnan(par(i, j)) && std::isnan(ser(i, j)))));
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("contour grid wraps and bounds the coarse search") {
  const PlannerConfig cfg;
  const TransferGeometry g(leo_heo(), cfg);
  const Eigen::MatrixXd grid = contour_grid(g, cfg, 31, 31);
  CHECK(grid.row(0) == grid.row(30));
  CHECK(grid.col(0) == grid.col(30));
  // each cell minimizes over a and all branches, so it cannot lose to a sampled level
  for (int i = 0; i < 30; i += 7)
    for (int j = 0; j < 30; j += 5) {
      const OrbitState s0 = g.initial().state_at(i / 30.0), sf = g.target().state_at(j / 30.0);
      for (double f : {1.0 + 1e-9, 1.5, 2.0})
        for (int b = 0; b < 4; ++b)
          CHECK(grid(i, j) <= ellipse_branch_dv(kEarthMu, s0, sf, f * a_min(s0.r, sf.r), b) + 1e-9);
    }
  CHECK_THROWS_AS(contour_grid(g, cfg, 1, 5), DomainError);
}

TEST_CASE("swapping the orbits keeps the optimum") {
  const PlannerConfig cfg;
  const TransferGeometry fwd(leo_heo(), cfg);
  const TransferGeometry rev(Problem{earth(), kHeo, kLeo}, cfg);
  const Eigen::MatrixXd a = contour_grid(fwd, cfg, 25, 25), b = contour_grid(rev, cfg, 25, 25);
  CHECK((a - b.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
  const PlanResult x = solve(leo_heo(), cfg, Mode::CoarseToFine);
  const PlanResult y = solve(Problem{earth(), kHeo, kLeo}, cfg, Mode::CoarseToFine);
  CHECK(std::abs(x.best.total_dv - y.best.total_dv) <= 1e-6);
}

TEST_CASE("scale equivariance") {
  const double lambda = 3.7;
  const PlannerConfig cfg = small_ellipse(30);
  const TransferGeometry base(leo_heo(), cfg);
  const CoarseResult c0 = coarse_search(base, cfg);
  SUBCASE("lengths and mu scaled alike keep velocities, impulse and stretch time") {
    Problem p = leo_heo();
    p.model.body.mu *= lambda;
    p.model.body.r_body *= lambda;
    p.initial.r *= lambda;
    p.target.r *= lambda;
    const CoarseResult c1 = coarse_search(TransferGeometry(p, cfg), cfg);
    CHECK(rel(c1.best.front().total_dv, c0.best.front().total_dv) <= 1e-9);
    CHECK(rel(c1.best.front().tof, lambda * c0.best.front().tof) <= 1e-9);
  }
  SUBCASE("lengths times lambda with mu times lambda cubed scale impulses by lambda") {
    Problem p = leo_heo();
    p.model.body.mu *= lambda * lambda * lambda;
    p.model.body.r_body *= lambda;
    p.initial.r *= lambda;
    p.target.r *= lambda;
    p.initial.v *= lambda;
    p.target.v *= lambda;
    const CoarseResult c1 = coarse_search(TransferGeometry(p, cfg), cfg);
    CHECK(rel(c1.best.front().total_dv, lambda * c0.best.front().total_dv) <= 1e-9);
    CHECK(rel(c1.best.front().tof, c0.best.front().tof) <= 1e-9);
  }
}

TEST_CASE("heat flow backend on a kepler problem") {
  const PlannerConfig cfg = small_heatflow();
  const TransferGeometry g(leo_heo(), cfg);
  const CoarseResult c = coarse_search(g, cfg);
  REQUIRE(!c.best.empty());
  CHECK(c.diagnostics.pairs == 5L * 5 * 2);
  for (const auto& s : c.best) {
    CHECK(s.residual <= cfg.coarse_flow.residual_tol);
    check_energy_identity(earth(), s);
    CHECK(s.branch >= 0);
    CHECK(s.branch <= 1);
  }
}

TEST_CASE("no feasible candidate is an empty result") {
  PlannerConfig cfg = small_heatflow();
  cfg.n_pos_samples = 3;
  cfg.coarse_flow.max_steps = 1;
  const TransferGeometry g(leo_heo(), cfg);
  CHECK_THROWS_AS(coarse_search(g, cfg), EmptyResultError);
}

TEST_CASE("best impulse for a pair") {
  const OrbitTrack a(earth(), kLeo, 1, 10), b(earth(), kHeo, 1, 10);
  const OrbitState s0 = a.samples()[3], sf = b.samples()[6];
  const double best = best_dv_for_pair(kEarthMu, s0, sf, 2.0);
  const double amin = a_min(s0.r, sf.r);
  double scan = 1e300;
  for (int k = 0; k <= 20000; ++k)
    for (int br = 0; br < 4; ++br)
      scan = std::min(scan, ellipse_branch_dv(kEarthMu, s0, sf, amin * (1.0 + k / 20000.0), br));
  CHECK(best <= scan + 1e-9);
  CHECK(best >= scan - 1e-6);
  CHECK(std::isnan(best_dv_for_pair(kEarthMu, s0, OrbitState{2.0 * s0.r, s0.v}, 2.0)));
}

TEST_CASE("refine-only examples") {
  const std::string dir = GEOTRANSFER_SCENARIO_DIR;
  SUBCASE("leo to heo") {
    const Scenario sc = load_scenario(dir + "/leo_heo.json");
    const PlanResult r = solve(sc.problem, sc.refine_only, Mode::RefineOnly);
    CHECK(r.best.total_dv == doctest::Approx(6.552653).epsilon(5e-4 / 6.552653));
    CHECK(r.coarse.empty());
  }
  SUBCASE("gto to rgeo stays in its local minimum") {
    const Scenario sc = load_scenario(dir + "/gto_rgeo.json");
    const PlanResult r = solve(sc.problem, sc.refine_only, Mode::RefineOnly);
    CHECK(std::abs(r.best.total_dv - 4.606196) <= 2e-2);
  }
  SUBCASE("earth to dionysus never beats coarse-to-fine") {
    const Scenario sc = load_scenario(dir + "/earth_dionysus.json");
    const PlanResult c2f = solve(sc.problem, sc.planner, Mode::CoarseToFine);
    const PlanResult ro = solve(sc.problem, sc.refine_only, Mode::RefineOnly);
    CHECK(ro.best.total_dv >= c2f.best.total_dv);
  }
}

TEST_CASE("earth to dionysus contour has one dominant basin") {
  const Scenario sc = load_scenario(std::string(GEOTRANSFER_SCENARIO_DIR) + "/earth_dionysus.json");
  const int n = 61;  // last row and column repeat the first
  const TransferGeometry g(sc.problem, sc.planner);
  const Eigen::MatrixXd grid = contour_grid(g, sc.planner, n, n);
  const int m = n - 1;
  auto value = [&](int i, int j) {
    const double v = grid((i + m) % m, (j + m) % m);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  int bi = 0, bj = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (value(i, j) < value(bi, bj)) bi = i, bj = j;

  // steepest descent on the periodic grid from the cell nearest the refined optimum
  const PlanResult r = solve(sc.problem, sc.planner, Mode::CoarseToFine);
  int i = static_cast<int>(std::lround(r.best.x(0) * m)) % m;
  int j = static_cast<int>(std::lround(r.best.x(1) * m)) % m;
  for (bool moved = true; moved;) {
    moved = false;
    int ni = i, nj = j;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        if (value(i + di, j + dj) < value(ni, nj)) ni = i + di, nj = j + dj;
    if (ni != i || nj != j) {
      i = (ni + m) % m;
      j = (nj + m) % m;
      moved = true;
    }
  }
  CHECK(i == bi);
  CHECK(j == bj);
}

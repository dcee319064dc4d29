// Acceptance gate: one pass/fail line per criterion. Run with no arguments
// for all criteria or with --criterion N for one of them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasegeo/geodesic.hpp"
#include "phasegeo/phasefield.hpp"
#include "phasegeo/potential.hpp"
#include "phasegeo/profile.hpp"
#include "phasegeo/sharp_interface.hpp"

using namespace phasegeo;
using json = nlohmann::json;

namespace {

constexpr double kSigma = 8.0 / 3.0;  // 2 * integral_{-1}^{1} (1 - u^2) du

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// --------------------------------------------------------------------------

Outcome c1() {
  constexpr double kTol = 1e-3;
  const auto pot = make_builtin("scalar-double-well");
  const auto r = geodesic_distance(pot, make_point({0.0}), make_state({-1.0}), make_state({1.0}));
  const double e = rel(r.cost, kSigma);
  return {e <= kTol, "d_W = " + fmt("%.10f", r.cost) + ", rel err " + fmt("%.2e", e) +
                         " (tol " + fmt("%.0e", kTol) + ")"};
}

std::vector<double> sweep_epsilons() { return {0.1, 0.05, 0.02, 0.01}; }

SweepScenario zero_mass() {
  SweepScenario s;
  s.constraint = ConstraintKind::mass;
  s.mass = make_state({0.0});
  s.position = 0.0;
  s.h_over_eps = 0.2;
  return s;
}

Outcome c2() {
  constexpr double kFinalTol = 0.05;
  // Relative slack in the monotone-approach check: at fixed h / eps the
  // discrete problems are scale invariant up to exponentially small
  // truncation, so successive gaps agree to about the solver tolerance.
  constexpr double kMonotoneSlack = 1e-8;
  const auto pot = make_builtin("scalar-double-well");
  const auto rec = epsilon_sweep(pot, zero_mass(), sweep_epsilons());
  bool monotone = true;
  std::ostringstream d;
  for (std::size_t k = 0; k < rec.rows.size(); ++k) {
    const double gap = std::abs(rec.rows[k].energy - kSigma);
    if (k > 0 && gap > std::abs(rec.rows[k - 1].energy - kSigma) + kMonotoneSlack * kSigma) {
      monotone = false;
    }
    d << "eps " << rec.rows[k].epsilon << ": E " << fmt("%.8f", rec.rows[k].energy) << "; ";
  }
  const double final_err = rel(rec.rows.back().energy, kSigma);
  d << "final rel err " << fmt("%.3e", final_err) << (monotone ? ", monotone" : ", NOT monotone");
  return {monotone && final_err <= kFinalTol, d.str()};
}

Outcome c3() {
  constexpr double kJumpTol = 1e-4;
  constexpr double kTensionTol = 1e-3;
  constexpr double kEnergyTol = 0.05;
  const auto pot = make_builtin("modulated");
  const auto jump = minimal_jump_1d(pot, 0, 1);
  const double oracle = std::sqrt(1.0 + jump.x * jump.x) * kSigma;
  const bool jump_ok = std::abs(jump.x) <= kJumpTol && rel(jump.energy, oracle) <= kTensionTol;

  // Wells pinned at the ends and the initial interface off center, so the
  // x-dependence of W has to move it; a mass constraint would fix it at 0.
  SweepScenario s;
  s.constraint = ConstraintKind::dirichlet;
  s.dirichlet = [](const Point& x) { return make_state({x[0] < 0.0 ? -1.0 : 1.0}); };
  s.position = 0.3;
  const auto rec = epsilon_sweep(pot, s, sweep_epsilons());
  const auto& last = rec.rows.back();
  const bool iface_ok = std::abs(last.interface) <= 2.0 * last.h;
  const double e_err = rel(last.energy, kSigma);
  std::ostringstream d;
  d << "x* = " << fmt("%.2e", jump.x) << ", F0* = " << fmt("%.8f", jump.energy)
    << "; interface at eps 0.01: " << fmt("%.2e", last.interface) << " (2h = " << 2 * last.h
    << "); energy rel err " << fmt("%.3e", e_err);
  return {jump_ok && iface_ok && e_err <= kEnergyTol, d.str()};
}

Outcome c4() {
  constexpr double kTol = 1e-3;
  constexpr int kInstances = 20;
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int failures = 0, length_failures = 0;
  for (int n = 0; n < kInstances; ++n) {
    const double r = 0.3;
    const double a1 = 0.5 + 1.5 * unit(rng), a2 = 0.5 + 1.5 * unit(rng);
    json opt = {{"constants", {{"alpha", {a1, a2}}, {"r", r}}}};
    const auto pot = make_builtin("blended-quadratic", opt);
    const Point x = make_point({0.0});
    const int i = n % 2;
    const State z = pot->well(i, x);
    const double alpha = i == 0 ? a1 : a2;
    const double th = 2.0 * M_PI * unit(rng);
    State p, q;
    double expected = 0.0;
    if (n < kInstances / 2) {
      // segment to the well
      const double dp = r * (0.2 + 0.7 * unit(rng));
      p = z + dp * make_state({std::cos(th), std::sin(th)});
      q = z;
      expected = std::sqrt(alpha) * dp * dp;
    } else {
      // both ends off the well at an angle of at least 100 degrees
      const double dp = r * (0.2 + 0.4 * unit(rng)), dq = r * (0.2 + 0.4 * unit(rng));
      const double gap = (100.0 + 80.0 * unit(rng)) * M_PI / 180.0;
      p = z + dp * make_state({std::cos(th), std::sin(th)});
      q = z + dq * make_state({std::cos(th + gap), std::sin(th + gap)});
      expected = std::sqrt(alpha) * (dp * dp + dq * dq);
    }
    const auto lb = length_bound(pot, Box::point(x), p, q);
    const double e = rel(lb.geodesic.cost, expected);
    worst = std::max(worst, e);
    failures += e > kTol;
    length_failures += lb.geodesic.length > lb.bound;
  }
  std::ostringstream d;
  d << kInstances << " instances, worst rel err " << fmt("%.2e", worst) << ", " << failures
    << " cost failures, " << length_failures << " length-bound violations";
  return {failures == 0 && length_failures == 0, d.str()};
}

Outcome c5() {
  constexpr double kTol = 1e-6;
  constexpr double kWidthSlack = 1e-9;
  constexpr int kCases = 50;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0, worst_corrected = 0.0;
  int identity_failures = 0, width_failures = 0;
  for (int n = 0; n < kCases; ++n) {
    const int kind = n % 4;
    PotentialPtr pot;
    Point x;
    std::vector<State> nodes;
    const int m = 3 + static_cast<int>(6 * unit(rng));
    if (kind == 0 || kind == 1) {
      pot = make_builtin(kind == 0 ? "scalar-double-well" : "modulated");
      x = make_point({-0.8 + 1.6 * unit(rng)});
      double u = -1.2 + 0.4 * unit(rng);
      for (int k = 0; k < m; ++k) {
        nodes.push_back(make_state({u}));
        u += 0.1 + 0.5 * unit(rng);
      }
    } else {
      pot = make_builtin(kind == 2 ? "blended-quadratic" : "product-distance");
      x = kind == 2 ? make_point({0.0}) : make_point({0.3 + 0.6 * unit(rng), 0.0});
      State p = make_state({-1.2 + 0.4 * unit(rng), -0.3 + 0.6 * unit(rng)});
      for (int k = 0; k < m; ++k) {
        nodes.push_back(p);
        p += make_state({0.1 + 0.4 * unit(rng), -0.2 + 0.4 * unit(rng)});
      }
    }
    const double eps = 0.005 + 0.1 * unit(rng);
    const double lam = std::pow(10.0, -4.0 + 3.0 * unit(rng));
    const auto prof = build_profile(pot, x, Curve{nodes}, eps, lam);
    const double energy = profile_energy(prof);
    const double rhs = reparametrized_cost(prof);
    const double e = std::abs(energy - rhs) / rhs;
    // the exact relation: energy = rhs - lambda tau / eps
    const double ec = std::abs(energy + lam * prof.tau() / eps - rhs) / rhs;
    worst = std::max(worst, e);
    worst_corrected = std::max(worst_corrected, ec);
    identity_failures += e > kTol;
    width_failures += prof.tau() > eps / std::sqrt(lam) * prof.curve_length() + kWidthSlack;
  }
  std::ostringstream d;
  d << kCases << " cases: identity worst rel err " << fmt("%.2e", worst) << " ("
    << identity_failures << " above " << fmt("%.0e", kTol) << "), width-bound violations "
    << width_failures << "; with the lambda*tau/eps term restored worst rel err "
    << fmt("%.2e", worst_corrected);
  return {identity_failures == 0 && width_failures == 0, d.str()};
}

Outcome c6() {
  constexpr double kFinalGap = 0.03;
  const auto pot = make_builtin("scalar-double-well");
  const double dw = geodesic_distance(pot, make_point({0.0}), make_state({-1.0}),
                                      make_state({1.0})).cost;
  std::vector<double> energies;
  std::ostringstream d;
  for (double eps : {0.02, 0.01, 0.005}) {
    const Grid grid = Grid::with_spacing(pot->domain(), eps / 10.0);
    const auto rec = recovery_sequence_1d(pot, grid, 0.0, 0, 1, eps);
    energies.push_back(energy(*pot, rec.field, eps));
    d << "eps " << eps << ": " << fmt("%.6f", energies.back()) << "; ";
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < energies.size(); ++k) {
    decreasing = decreasing && energies[k] < energies[k - 1];
  }
  const double gap = (energies.back() - dw) / dw;
  d << "d_W " << fmt("%.6f", dw) << ", final gap " << fmt("%.3e", gap)
    << (decreasing ? ", decreasing" : ", NOT decreasing");
  return {decreasing && gap >= -1e-9 && gap <= kFinalGap, d.str()};
}

Outcome c7() {
  constexpr double kMassTol = 1e-10;
  constexpr double kDirichletTol = 0.08;
  const auto pot = make_builtin("scalar-double-well");
  // mass: every accepted step of every row of a zero-mass sweep
  const auto rec = epsilon_sweep(pot, zero_mass(), sweep_epsilons());
  double mass_err = 0.0;
  for (const auto& r : rec.rows) mass_err = std::max(mass_err, r.max_mass_error);

  SweepScenario s;
  s.constraint = ConstraintKind::dirichlet;
  const State gl = make_state({-1.0}), gr = make_state({0.0});
  s.dirichlet = [gl, gr](const Point& x) { return x(0) < 0.0 ? gl : gr; };
  s.left = 0;
  s.right = 1;
  s.position = 2.0;  // outside: start from the left phase everywhere
  const auto drec = epsilon_sweep(pot, s, sweep_epsilons());
  const double limit = dirichlet_energy_1d(pot, {{}, {0}}, gl, gr);
  const double e = rel(drec.rows.back().energy, limit);
  std::ostringstream d;
  d << "max mass error " << fmt("%.2e", mass_err) << "; Dirichlet energy at eps 0.01 "
    << fmt("%.6f", drec.rows.back().energy) << " vs F0 + penalty " << fmt("%.6f", limit)
    << ", rel err " << fmt("%.3e", e);
  return {mass_err <= kMassTol && e <= kDirichletTol, d.str()};
}

PotentialPtr moving_blended() {
  json wells = json::array();
  wells.push_back({{"type", "affine"}, {"offset", {-1.0, 0.0}}, {"slope", {{0.2}, {0.1}}}});
  wells.push_back({{"type", "affine"}, {"offset", {1.0, 0.0}}, {"slope", {{0.0}, {-0.2}}}});
  return make_builtin("blended-quadratic", {{"wells", wells}});
}

Outcome c8() {
  constexpr double kSelf = 1e-6;
  constexpr double kSymmetry = 1e-4;
  constexpr double kTriangle = 1e-3;
  constexpr double kBlowUp = 2.0;  // small-spacing quotient vs large-spacing quotient
  constexpr double kQuotientNoise = 1e-3;
  const auto pot = moving_blended();
  const double big_r = pot->constants().R;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto ball = [&] {
    const double rad = big_r * std::sqrt(unit(rng)), a = 2.0 * M_PI * unit(rng);
    return make_state({rad * std::cos(a), rad * std::sin(a)});
  };
  GeodesicConfig cfg;
  cfg.nodes = 64;
  const Point x = make_point({0.25});
  int self = 0, sym = 0, tri = 0;
  double worst_sym = 0.0, worst_tri = -1e300;
  for (int n = 0; n < 50; ++n) {
    const State p = ball(), q = ball(), s = ball();
    const double pp = geodesic_distance(pot, x, p, p, cfg).cost;
    const double pq = geodesic_distance(pot, x, p, q, cfg).cost;
    const double qp = geodesic_distance(pot, x, q, p, cfg).cost;
    const double qs = geodesic_distance(pot, x, q, s, cfg).cost;
    const double ps = geodesic_distance(pot, x, p, s, cfg).cost;
    self += pp > kSelf;
    worst_sym = std::max(worst_sym, std::abs(pq - qp) / (1.0 + pq));
    sym += std::abs(pq - qp) > kSymmetry * (1.0 + pq);
    worst_tri = std::max(worst_tri, ps - pq - qs);
    tri += ps > pq + qs + kTriangle;
  }
  // Lipschitz quotient in x at fixed states
  const State p = make_state({-0.9, 0.2}), q = make_state({1.1, -0.1});
  double small_q = 0.0, large_q = 0.0;
  bool finite = true;
  for (int n = 0; n < 100; ++n) {
    const double xa = -1.0 + 2.0 * unit(rng);
    const double step = std::pow(10.0, -3.0 + 2.7 * unit(rng));
    double xb = xa + (unit(rng) < 0.5 ? -step : step);
    if (xb < -1.0 || xb > 1.0) xb = xa - (xb - xa);
    const double da = geodesic_distance(pot, make_point({xa}), p, q, cfg).cost;
    const double db = geodesic_distance(pot, make_point({xb}), p, q, cfg).cost;
    const double quot = std::abs(da - db) / std::abs(xa - xb);
    finite = finite && std::isfinite(quot);
    (step < 1e-2 ? small_q : large_q) = std::max(step < 1e-2 ? small_q : large_q, quot);
  }
  const bool lip = finite && small_q <= kBlowUp * large_q + kQuotientNoise;
  std::ostringstream d;
  d << "self " << self << ", symmetry " << sym << " (worst " << fmt("%.1e", worst_sym)
    << "), triangle " << tri << " (worst excess " << fmt("%.1e", worst_tri)
    << ") failures; Lipschitz quotient " << fmt("%.4f", std::max(small_q, large_q))
    << " (small spacing " << fmt("%.4f", small_q) << ", large " << fmt("%.4f", large_q) << ")";
  return {self == 0 && sym == 0 && tri == 0 && lip, d.str()};
}

Outcome c9() {
  constexpr double kBoundSlack = 1e-3;
  constexpr double kGrowth = 2.0;
  const auto pot = make_builtin("product-distance");
  std::vector<double> xs;
  for (int k = 2; k <= 10; ++k) xs.push_back(0.1 * k);
  const auto rows = counterexample_table(pot, xs);
  int bad = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    bad += r.distance > r.bound * (1.0 + kBoundSlack);
    worst = std::max(worst, r.distance / r.bound);
  }
  const auto lv = counterexample_refinement(pot, {0.5, 0.25, 0.125});
  const double growth = lv[2].plain / lv[0].plain;
  // bounded: increments of the weighted sum shrink at least geometrically
  const double inc1 = lv[1].weighted - lv[0].weighted, inc2 = lv[2].weighted - lv[1].weighted;
  const bool bounded = inc2 <= 0.5 * inc1;
  std::ostringstream d;
  d << "max d_W / x1^6 = " << fmt("%.4f", worst) << " (" << bad << " violations); weighted "
    << fmt("%.5f", lv[0].weighted) << " " << fmt("%.5f", lv[1].weighted) << " "
    << fmt("%.5f", lv[2].weighted) << "; plain " << fmt("%.4f", lv[0].plain) << " "
    << fmt("%.4f", lv[1].plain) << " " << fmt("%.4f", lv[2].plain) << " (growth "
    << fmt("%.2f", growth) << "x)";
  return {bad == 0 && bounded && growth >= kGrowth, d.str()};
}

Outcome c10() {
  constexpr double kTol = 1e-5;
  constexpr double kStep = 1e-6;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  int checks = 0;
  auto check = [&](const MultiWellPotential& pot, Field f, double eps) {
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::MatrixXd v(f.values.rows(), f.values.cols());
      for (Eigen::Index k = 0; k < v.size(); ++k) v.data()[k] = normal(rng);
      if (f.boundary == BoundaryKind::dirichlet) {
        for (int k = 0; k < f.grid.size(); ++k) {
          if (f.grid.on_boundary(k)) v.col(k).setZero();
        }
      }
      const double analytic = grid_inner(f.grid, energy_gradient(pot, f, eps), v);
      Field a = f, b = f;
      a.values += kStep * v;
      b.values -= kStep * v;
      const double fd = (energy(pot, a, eps) - energy(pot, b, eps)) / (2.0 * kStep);
      worst = std::max(worst, std::abs(analytic - fd) / std::max(std::abs(fd), 1e-12));
      ++checks;
    }
  };
  auto random_field = [&](const Grid& g, int m) {
    Field f;
    f.grid = g;
    f.values.resize(m, g.size());
    for (Eigen::Index k = 0; k < f.values.size(); ++k) f.values.data()[k] = 0.7 * normal(rng);
    return f;
  };
  const auto dw = make_builtin("scalar-double-well");
  const auto mod = make_builtin("modulated");
  const auto bl = moving_blended();
  const auto dw2 = make_builtin("scalar-double-well",
                                {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}});
  const Grid g1(dw->domain(), 41), g2(dw2->domain(), 13, 11);
  for (int spec = 0; spec < 3; ++spec) {
    auto setup = [&](Field f) {
      if (spec == 1) f.set_dirichlet([&](const Point& x) { return State(0.3 * x.sum() * State::Ones(f.state_dim())); });
      if (spec == 2) f.mass = f.integral();
      return f;
    };
    check(*dw, setup(random_field(g1, 1)), 0.1);
    check(*mod, setup(random_field(g1, 1)), 0.05);
    check(*bl, setup(random_field(g1, 2)), 0.1);
    check(*dw2, setup(random_field(g2, 1)), 0.1);
  }
  return {worst <= kTol, std::to_string(checks) + " directional checks (natural, Dirichlet, mass), worst rel err " +
                             fmt("%.2e", worst)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "scalar surface tension", 1.0, c1},
      {2, "double-well epsilon sweep", 60.0, c2},
      {3, "moving wells", 120.0, c3},
      {4, "near-well closed forms", 10.0, c4},
      {5, "profile energy identity", 10.0, c5},
      {6, "1D recovery sequence", 30.0, c6},
      {7, "mass and Dirichlet variants", 120.0, c7},
      {8, "metric and Lipschitz properties", 60.0, c8},
      {9, "non-separated wells", 60.0, c9},
      {10, "energy gradient", 10.0, c10},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d [%s] %s: %s; %.2f s (limit %.0f s)\n", c.id, pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str(), secs, c.limit_seconds);
  }
  return failed == 0 ? 0 : 1;
}

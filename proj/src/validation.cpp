#include <algorithm>
#include <cmath>

#include "phasegeo/errors.hpp"
#include "phasegeo/potential.hpp"
#include "phasegeo/quadrature.hpp"

namespace phasegeo {

using nlohmann::json;

namespace {

// Unit directions in R^m: every nonzero vector with entries in {-1, 0, 1}
// (normalized), plus extra angles in the plane for m == 2.
std::vector<State> directions(int m) {
  std::vector<State> out;
  if (m == 2) {
    constexpr int kAngles = 24;
    for (int a = 0; a < kAngles; ++a) {
      const double t = 2.0 * M_PI * a / kAngles;
      out.push_back(make_state({std::cos(t), std::sin(t)}));
    }
    return out;
  }
  std::vector<int> idx(m, -1);
  while (true) {
    State v(m);
    for (int c = 0; c < m; ++c) v(c) = idx[c];
    if (v.norm() > 0) out.push_back(v.normalized());
    int c = 0;
    while (c < m && ++idx[c] > 1) idx[c++] = -1;
    if (c == m) break;
  }
  return out;
}

struct Sampler {
  std::vector<Point> xs;
  std::vector<State> grid;  // state-space grid covering the wells
  std::vector<State> dirs;
};

Sampler make_sampler(const MultiWellPotential& w, const Box& region, int density) {
  Sampler s;
  const int n = std::max(4, static_cast<int>(std::ceil(std::sqrt(double(density)))));
  const int per_axis_x =
      region.dim() == 1 ? n : std::max(3, static_cast<int>(std::ceil(std::sqrt(double(n)))));
  s.xs = region.sample_grid(per_axis_x);
  const int m = w.state_dim();
  State lo = State::Constant(m, std::numeric_limits<double>::infinity());
  State hi = -lo;
  for (const auto& x : s.xs) {
    for (int i = 0; i < w.num_wells(); ++i) {
      const State z = w.well(i, x);
      lo = lo.cwiseMin(z);
      hi = hi.cwiseMax(z);
    }
  }
  const double margin = std::max(2.0 * w.constants().r, 0.5);
  lo.array() -= margin;
  hi.array() += margin;
  const int per_axis_p = std::max(3, static_cast<int>(std::ceil(std::pow(double(n), 1.0 / m))));
  std::vector<int> idx(m, 0);
  while (true) {
    State p(m);
    for (int c = 0; c < m; ++c) p(c) = lo(c) + (hi(c) - lo(c)) * idx[c] / double(per_axis_p - 1);
    s.grid.push_back(p);
    int c = 0;
    while (c < m && ++idx[c] == per_axis_p) idx[c++] = 0;
    if (c == m) break;
  }
  s.dirs = directions(m);
  return s;
}

double nearest_well_distance(const MultiWellPotential& w, const Point& x, const State& p) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.num_wells(); ++i) d = std::min(d, (p - w.well(i, x)).norm());
  return d;
}

}  // namespace

double empirical_eta(const MultiWellPotential& w, const Box& region, int density) {
  const Sampler s = make_sampler(w, region, density);
  const double r = w.constants().r;
  double eta = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& x, const State& p) {
    if (nearest_well_distance(w, x, p) >= 0.5 * r) eta = std::min(eta, w.value(x, p));
  };
  for (const auto& x : s.xs) {
    for (const auto& p : s.grid) consider(x, p);
    for (int i = 0; i < w.num_wells(); ++i) {
      const State z = w.well(i, x);
      for (double rad : {0.5 * r * (1.0 + 1e-12), 0.75 * r, r, 1.5 * r, 2.0 * r, 3.0 * r}) {
        for (const auto& d : s.dirs) consider(x, State(z + rad * d));
      }
    }
  }
  return eta;
}

bool AssumptionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const AssumptionCheck& AssumptionReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ParameterError("no assumption named " + name);
}

json AssumptionReport::to_json() const {
  json out = json::array();
  for (const auto& c : checks) {
    json wx = json::array(), wp = json::array();
    for (Eigen::Index a = 0; a < c.witness_x.size(); ++a) wx.push_back(c.witness_x(a));
    for (Eigen::Index a = 0; a < c.witness_p.size(); ++a) wp.push_back(c.witness_p(a));
    out.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"margin", c.margin},
                   {"witness_x", wx},
                   {"witness_p", wp},
                   {"detail", c.detail}});
  }
  return {{"checks", out}, {"empirical_eta", empirical_eta}, {"all_pass", all_pass()}};
}

AssumptionReport validate_assumptions(const MultiWellPotential& w, int density) {
  if (density <= 0) throw ParameterError("validate: sample density must be positive");
  const Sampler s = make_sampler(w, w.domain(), density);
  const auto& k = w.constants();
  const int nw = w.num_wells();
  AssumptionReport report;

  // H1: zero exactly on the wells, nonnegative, Lipschitz well maps.
  {
    AssumptionCheck c{"H1", true, std::numeric_limits<double>::infinity(), s.xs.front(),
                      w.well(0, s.xs.front()), ""};
    auto worse = [&](double margin, const Point& x, const State& p, const std::string& why) {
      if (margin < c.margin) {
        c.margin = margin;
        c.witness_x = x;
        c.witness_p = p;
        c.detail = why;
      }
    };
    for (const auto& x : s.xs) {
      for (int i = 0; i < nw; ++i) {
        const State z = w.well(i, x);
        worse(1e-12 - w.value(x, z), x, z, "W at well");
      }
      for (const auto& p : s.grid) {
        const double v = w.value(x, p);
        if (!std::isfinite(v)) worse(-std::numeric_limits<double>::infinity(), x, p, "non-finite W");
        if (nearest_well_distance(w, x, p) > 1e-6) {
          worse(v, x, p, "W off the wells");
        } else {
          worse(v + 1e-12, x, p, "W near a well");
        }
      }
    }
    for (int i = 0; i < nw; ++i) {
      const double lip = w.well_map(i).lipschitz(w.domain());
      for (std::size_t a = 0; a < s.xs.size(); ++a) {
        for (std::size_t b = a + 1; b < std::min(s.xs.size(), a + 8); ++b) {
          const double dx = (s.xs[a] - s.xs[b]).norm();
          if (dx == 0.0) continue;
          const double q = (w.well(i, s.xs[a]) - w.well(i, s.xs[b])).norm() / dx;
          worse(lip * (1.0 + 1e-9) + 1e-12 - q, s.xs[a], w.well(i, s.xs[a]), "Lipschitz quotient");
        }
      }
    }
    c.pass = c.margin >= 0.0;
    report.checks.push_back(c);
  }

  // H2: uniform separation of the wells.
  {
    AssumptionCheck c{"H2", true, std::numeric_limits<double>::infinity(), s.xs.front(),
                      w.well(0, s.xs.front()), "single well"};
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto& x : s.xs) {
      for (int i = 0; i < nw; ++i) {
        for (int j = i + 1; j < nw; ++j) {
          const double sep = (w.well(i, x) - w.well(j, x)).norm();
          // prefer the witness with the largest x_1 among ties, i.e. the
          // approach from inside the region where wells are still distinct
          if (sep < min_sep || (sep == min_sep && x(0) > c.witness_x(0))) {
            min_sep = sep;
            c.witness_x = x;
            c.witness_p = w.well(i, x);
            c.detail = "min |z_" + std::to_string(i + 1) + " - z_" + std::to_string(j + 1) + "|";
          }
        }
      }
    }
    if (nw > 1) {
      c.margin = min_sep - k.delta;
      c.pass = min_sep > 0.0 && c.margin >= -1e-12 * (1.0 + k.delta);
      if (min_sep == 0.0) c.margin = -std::max(k.delta, 0.0);
    } else {
      c.margin = 0.0;
    }
    report.checks.push_back(c);
  }

  // H3: quadratic behaviour inside radius r.
  {
    AssumptionCheck c{"H3", true, std::numeric_limits<double>::infinity(), s.xs.front(),
                      w.well(0, s.xs.front()), ""};
    if (!(k.r > 0.0)) {
      c.pass = false;
      c.margin = -1.0;
      c.detail = "no quadratic radius declared";
    }
    for (const auto& x : s.xs) {
      for (int i = 0; i < nw && k.r > 0.0; ++i) {
        const State z = w.well(i, x);
        const double a = w.alpha(i, x);
        if (!(a > 1e-12)) {
          if (-1.0 < c.margin) {
            c.margin = -1.0;
            c.witness_x = x;
            c.witness_p = z;
            c.detail = "alpha_i(x) vanishes";
          }
          continue;
        }
        for (const auto& d : s.dirs) {
          if (w.exact_h3()) {
            for (double frac : {0.1, 0.25, 0.5, 0.75, 0.99}) {
              const State p = z + frac * k.r * d;
              const double dev = std::abs(w.value(x, p) - a * (p - z).squaredNorm());
              const double m = 1e-10 * (1.0 + a * k.r * k.r) - dev;
              if (m < c.margin) {
                c.margin = m;
                c.witness_x = x;
                c.witness_p = p;
                c.detail = "exact quadratic deviation";
              }
            }
          } else {
            // asymptotically quadratic: W / (alpha d^2) -> 1 as d -> 0
            const State p = z + 1e-3 * k.r * d;
            const double ratio = w.value(x, p) / (a * (p - z).squaredNorm());
            const double m = 0.05 - std::abs(ratio - 1.0);
            if (m < c.margin) {
              c.margin = m;
              c.witness_x = x;
              c.witness_p = p;
              c.detail = "asymptotic quadratic ratio";
            }
          }
        }
      }
    }
    c.pass = c.margin >= 0.0;
    report.checks.push_back(c);
  }

  // H4: linear growth W >= S |p| for |p| > R.
  {
    AssumptionCheck c{"H4", true, std::numeric_limits<double>::infinity(), s.xs.front(),
                      State::Zero(w.state_dim()), ""};
    if (!(k.S > 0.0) || !(k.R > 0.0)) {
      c.pass = false;
      c.margin = -1.0;
      c.detail = "growth constants not declared";
    } else {
      for (const auto& x : s.xs) {
        for (double rad : {k.R * (1.0 + 1e-9), 1.25 * k.R, 1.5 * k.R, 2.0 * k.R, 4.0 * k.R}) {
          for (const auto& d : s.dirs) {
            const State p = rad * d;
            const double m = w.value(x, p) - k.S * p.norm();
            if (m < c.margin) {
              c.margin = m;
              c.witness_x = x;
              c.witness_p = p;
              c.detail = "W - S|p|";
            }
          }
        }
      }
      c.pass = c.margin >= 0.0;
    }
    report.checks.push_back(c);
  }

  // Floor away from the wells.
  {
    report.empirical_eta = k.r > 0.0 ? empirical_eta(w, w.domain(), density) : 0.0;
    AssumptionCheck c{"Hold4", true, report.empirical_eta, s.xs.front(), w.well(0, s.xs.front()),
                      "sampled infimum outside B(z_i, r/2)"};
    if (!std::isnan(k.eta)) {
      c.margin = report.empirical_eta - k.eta;
      c.pass = report.empirical_eta > 0.0 && c.margin >= -1e-9 * (1.0 + k.eta);
    } else {
      c.pass = report.empirical_eta > 0.0;
    }
    report.checks.push_back(c);
  }
  return report;
}

// --------------------------------------------------------------------------
// Maxwell parameters

MaxwellParameters maxwell_parameters(const ScalarFunction& w0, double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("maxwell: empty bracket");
  const auto& f = w0.value;
  const auto& df = w0.derivative;
  const double fd_step = 1e-6 * (hi - lo);
  auto d2f = [&](double u) { return (df(u + fd_step) - df(u - fd_step)) / (2.0 * fd_step); };

  constexpr int kScan = 2001;
  int first = -1, last = -1;
  for (int k = 1; k < kScan - 1; ++k) {
    const double u = lo + (hi - lo) * k / (kScan - 1);
    if (d2f(u) < 0.0) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) throw NoBitangentError("maxwell: W0 is convex on the bracket");
  const double c1 = lo + (hi - lo) * (first - 1) / (kScan - 1);
  const double c2 = lo + (hi - lo) * (last + 1) / (kScan - 1);

  // Tangent point with slope mu on a convex branch, clamped to the branch.
  auto touch = [&](double mu, double a, double b) {
    if (df(a) >= mu) return a;
    if (df(b) <= mu) return b;
    return bisect([&](double u) { return df(u) - mu; }, a, b, 1e-15 * (1.0 + std::abs(b - a)));
  };
  auto gap = [&](double mu) {
    const double ul = touch(mu, lo, c1), ur = touch(mu, c2, hi);
    return (f(ul) - mu * ul) - (f(ur) - mu * ur);
  };
  const double mu_lo = std::max(df(lo), df(c2));
  const double mu_hi = std::min(df(c1), df(hi));
  if (!(mu_lo < mu_hi)) throw NoBitangentError("maxwell: no admissible common slope");
  const double g_lo = gap(mu_lo), g_hi = gap(mu_hi);
  if ((g_lo > 0.0) == (g_hi > 0.0)) throw NoBitangentError("maxwell: no sign change in slope");
  const double mu0 = bisect(gap, mu_lo, mu_hi, 1e-14 * (1.0 + std::abs(mu_hi)));

  // Damped Newton polish on the tangency system.
  double a = touch(mu0, lo, c1), b = touch(mu0, c2, hi);
  auto residual = [&](double x, double y) {
    return Eigen::Vector2d(df(x) - df(y), f(y) - f(x) - df(x) * (y - x));
  };
  Eigen::Vector2d r = residual(a, b);
  for (int it = 0; it < 100 && r.norm() > 1e-14; ++it) {
    Eigen::Matrix2d jac;
    jac << d2f(a), -d2f(b), -d2f(a) * (b - a), df(b) - df(a);
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    while (t > 1e-8) {
      const Eigen::Vector2d trial = residual(a + t * step(0), b + t * step(1));
      if (trial.norm() < r.norm()) {
        a += t * step(0);
        b += t * step(1);
        r = trial;
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-8) break;
  }
  if (!(r.norm() <= 1e-10) || !(b - a > 1e-8)) {
    throw NoBitangentError("maxwell: Newton polish did not converge");
  }
  return {a, b, df(a)};
}

}  // namespace phasegeo

#include "phasegeo/sharp_interface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "phasegeo/errors.hpp"
#include "phasegeo/interpolation.hpp"
#include "phasegeo/quadrature.hpp"

namespace phasegeo {

double well_distance(PotentialPtr potential, const Point& x, const State& p, const State& q,
                     const GeodesicConfig& config) {
  if (p.size() != potential->state_dim() || q.size() != potential->state_dim()) {
    throw ParameterError("d_W: state dimension mismatch");
  }
  if (p == q) {
    if (!potential->domain().contains(x)) throw DomainError("d_W: x outside the closed domain");
    return 0.0;
  }
  if (potential->state_dim() == 1) return scalar_distance(*potential, x, p(0), q(0));
  return geodesic_distance(potential, x, p, q, config).cost;
}

// --------------------------------------------------------------------------
// TensionCache

TensionCache::TensionCache(PotentialPtr potential, GeodesicConfig config)
    : potential_(std::move(potential)), config_(config) {}

double TensionCache::operator()(const Point& x, int i, int j) {
  const int nw = potential_->num_wells();
  if (i < 0 || j < 0 || i >= nw || j >= nw) throw ParameterError("tension: label out of range");
  if (i == j) return 0.0;
  if (!potential_->domain().contains(x)) throw DomainError("tension: x outside the domain");
  if (i > j) std::swap(i, j);
  const Box& dom = potential_->domain();
  Point xq = x;
  long long key[2] = {0, 0};
  for (int c = 0; c < x.size(); ++c) {
    key[c] = std::llround(x(c) / kQuantum);
    xq(c) = std::clamp(key[c] * kQuantum, dom.lo(c), dom.hi(c));
  }
  const Key k{key[0], key[1], i, j};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(k);
    if (it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const double d =
      well_distance(potential_, xq, potential_->well(i, xq), potential_->well(j, xq), config_);
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(k, d);
  return d;
}

std::size_t TensionCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return memo_.size();
}

std::size_t TensionCache::hits() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return hits_;
}

// --------------------------------------------------------------------------
// F0

namespace {

void check_config(const MultiWellPotential& pot, const JumpConfiguration1D& c) {
  if (pot.space_dim() != 1) throw ParameterError("jump configuration: needs a 1D domain");
  if (c.labels.size() != c.jumps.size() + 1) {
    throw ParameterError("jump configuration: need one label per subinterval");
  }
  for (int l : c.labels) {
    if (l < 0 || l >= pot.num_wells()) throw ParameterError("jump configuration: bad label");
  }
  const Box& d = pot.domain();
  for (std::size_t k = 0; k < c.jumps.size(); ++k) {
    if (!(c.jumps[k] > d.lo(0) && c.jumps[k] < d.hi(0))) {
      throw ParameterError("jump configuration: jumps must be interior");
    }
    if (k > 0 && !(c.jumps[k] > c.jumps[k - 1])) {
      throw ParameterError("jump configuration: jumps must be increasing");
    }
    if (c.labels[k] == c.labels[k + 1]) {
      throw ParameterError("jump configuration: adjacent labels must differ");
    }
  }
}

}  // namespace

F0Result F0_energy_1d(PotentialPtr potential, const JumpConfiguration1D& config,
                      TensionCache* cache) {
  check_config(*potential, config);
  std::optional<TensionCache> local;
  if (!cache) cache = &local.emplace(potential);
  F0Result out;
  for (std::size_t k = 0; k < config.jumps.size(); ++k) {
    out.parts.push_back(
        (*cache)(make_point({config.jumps[k]}), config.labels[k], config.labels[k + 1]));
    out.total += out.parts.back();
  }
  return out;
}

F0Result F0_energy_2d(PotentialPtr potential, const InterfaceMesh2D& mesh,
                      int quadrature_per_segment, TensionCache* cache, int threads) {
  if (potential->space_dim() != 2) throw ParameterError("F0_2d: needs a 2D domain");
  if (quadrature_per_segment < 2) throw ParameterError("F0_2d: need at least two nodes");
  for (const auto& s : mesh.segments) {
    if (s.left == s.right) throw ParameterError("F0_2d: segment labels must differ");
    if (!potential->domain().contains(s.a) || !potential->domain().contains(s.b)) {
      throw DomainError("F0_2d: segment leaves the domain");
    }
  }
  std::optional<TensionCache> local;
  if (!cache) cache = &local.emplace(potential);
  const GaussLegendre rule(quadrature_per_segment);
  const int n = static_cast<int>(mesh.segments.size());
  F0Result out;
  out.parts.assign(n, 0.0);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (int k = next++; k < n; k = next++) {
      try {
        const auto& s = mesh.segments[k];
        const double len = (s.b - s.a).norm();
        if (len == 0.0) continue;
        double v = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const double t = 0.5 * (1.0 + rule.nodes[q]);
          const Point x = (1.0 - t) * s.a + t * s.b;
          v += rule.weights[q] * (*cache)(x, s.left, s.right);
        }
        out.parts[k] = 0.5 * len * v;
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::clamp(threads, 1, std::max(n, 1)); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (double p : out.parts) out.total += p;
  return out;
}

// --------------------------------------------------------------------------
// Minimal jump

State two_phase_mass(const MultiWellPotential& potential, int i, int j, double x) {
  const Box& d = potential.domain();
  static const GaussLegendre rule(16);
  State total = State::Zero(potential.state_dim());
  for (int c = 0; c < potential.state_dim(); ++c) {
    auto comp = [&](int w) {
      return [&, w](double s) { return potential.well(w, make_point({s}))(c); };
    };
    total(c) = rule.integrate_composite(comp(i), d.lo(0), x, 32) +
               rule.integrate_composite(comp(j), x, d.hi(0), 32);
  }
  return total;
}

MinimalJump minimal_jump_1d(PotentialPtr potential, int i, int j, const std::optional<State>& mass,
                            const MinimalJumpOptions& options) {
  if (potential->space_dim() != 1) throw ParameterError("minimal_jump_1d: needs a 1D domain");
  if (i == j) throw ParameterError("minimal_jump_1d: labels must differ");
  const int nw = potential->num_wells();
  if (i < 0 || j < 0 || i >= nw || j >= nw) throw ParameterError("minimal_jump_1d: bad label");
  const double lo = potential->domain().lo(0), hi = potential->domain().hi(0);
  auto tension = [&](double x) {
    const Point p = make_point({x});
    return well_distance(potential, p, potential->well(i, p), potential->well(j, p),
                         options.geodesic);
  };

  if (mass) {
    if (mass->size() != potential->state_dim()) {
      throw ParameterError("minimal_jump_1d: mass dimension mismatch");
    }
    // pick the component along which the mass map moves the most
    const State m_lo = two_phase_mass(*potential, i, j, lo);
    const State m_hi = two_phase_mass(*potential, i, j, hi);
    Eigen::Index c = 0;
    (m_hi - m_lo).cwiseAbs().maxCoeff(&c);
    auto f = [&](double x) { return two_phase_mass(*potential, i, j, x)(c) - (*mass)(c); };
    double prev = f(lo);
    const double dir = m_hi(c) - m_lo(c);
    if (dir == 0.0) throw InfeasibleError("minimal_jump_1d: mass does not depend on the jump");
    for (int k = 1; k <= 64; ++k) {
      const double v = f(lo + (hi - lo) * k / 64);
      if ((v - prev) * dir < -1e-12) throw InfeasibleError("minimal_jump_1d: mass map not monotone");
      prev = v;
    }
    const double tol = 1e-10 * (1.0 + std::abs((*mass)(c)));
    if (std::min(f(lo), f(hi)) > tol || std::max(f(lo), f(hi)) < -tol) {
      throw InfeasibleError("minimal_jump_1d: mass not attainable with one jump");
    }
    const double x = std::clamp(bisect(f, lo, hi, 1e-13 * (hi - lo)), lo, hi);
    const State err = two_phase_mass(*potential, i, j, x) - *mass;
    if (err.cwiseAbs().maxCoeff() > 1e-8 * (1.0 + mass->cwiseAbs().maxCoeff())) {
      throw InfeasibleError("minimal_jump_1d: mass not attainable with one jump");
    }
    if (!(x > lo && x < hi)) throw InfeasibleError("minimal_jump_1d: jump forced to the boundary");
    return {x, tension(x)};
  }

  const int n = std::max(options.scan_points, 3);
  std::vector<double> xs(n), vs(n);
  int best = 0;
  for (int k = 0; k < n; ++k) {
    xs[k] = lo + (hi - lo) * (k + 1) / (n + 1);
    vs[k] = tension(xs[k]);
    if (vs[k] < vs[best]) best = k;  // strict: ties stay at the smaller x
  }
  const double a = best > 0 ? xs[best - 1] : lo;
  const double b = best + 1 < n ? xs[best + 1] : hi;
  double x = golden_section_minimize(tension, a, b, options.tolerance);
  double v = tension(x);
  if (vs[best] < v) {
    x = xs[best];
    v = vs[best];
  }
  return {x, v};
}

// --------------------------------------------------------------------------
// Dirichlet

double dirichlet_energy_1d(PotentialPtr potential, const JumpConfiguration1D& config,
                           const State& g_left, const State& g_right,
                           const GeodesicConfig& geodesic) {
  check_config(*potential, config);
  TensionCache cache(potential, geodesic);
  const double f0 = F0_energy_1d(potential, config, &cache).total;
  const Point a = potential->domain().lo, b = potential->domain().hi;
  return f0 + well_distance(potential, a, potential->well(config.labels.front(), a), g_left, geodesic) +
         well_distance(potential, b, potential->well(config.labels.back(), b), g_right, geodesic);
}

double dirichlet_energy_2d(PotentialPtr potential, const InterfaceMesh2D& mesh,
                           const std::function<int(const Point&)>& trace_label,
                           const std::function<State(const Point&)>& g,
                           int quadrature_per_segment, int quadrature_per_side,
                           const GeodesicConfig& geodesic) {
  if (potential->space_dim() != 2) throw ParameterError("dirichlet_energy_2d: needs a 2D domain");
  if (quadrature_per_side < 1) throw ParameterError("dirichlet_energy_2d: need quadrature nodes");
  TensionCache cache(potential, geodesic);
  double total = F0_energy_2d(potential, mesh, quadrature_per_segment, &cache).total;
  const Box& d = potential->domain();
  const Point corners[4] = {make_point({d.lo(0), d.lo(1)}), make_point({d.hi(0), d.lo(1)}),
                            make_point({d.hi(0), d.hi(1)}), make_point({d.lo(0), d.hi(1)})};
  const GaussLegendre rule(quadrature_per_side);
  for (int side = 0; side < 4; ++side) {
    const Point& a = corners[side];
    const Point& b = corners[(side + 1) % 4];
    auto penalty = [&](double t) {
      const Point x = (1.0 - t) * a + t * b;
      const int l = trace_label(x);
      if (l < 0 || l >= potential->num_wells()) throw ParameterError("dirichlet: bad trace label");
      return well_distance(potential, x, potential->well(l, x), g(x), geodesic);
    };
    total += (b - a).norm() * rule.integrate_composite(penalty, 0.0, 1.0, 16);
  }
  return total;
}

// --------------------------------------------------------------------------
// Counterexample

std::vector<CounterexampleRow> counterexample_table(PotentialPtr potential,
                                                    const std::vector<double>& x1_values,
                                                    const GeodesicConfig& geodesic) {
  if (potential->num_wells() != 2 || potential->space_dim() != 2) {
    throw ParameterError("counterexample: needs two wells on a 2D domain");
  }
  std::vector<CounterexampleRow> out;
  for (double x1 : x1_values) {
    const Point x = make_point({x1, 0.0});
    CounterexampleRow row;
    row.x1 = x1;
    row.distance = well_distance(potential, x, potential->well(0, x), potential->well(1, x), geodesic);
    row.bound = std::pow(x1, 6);
    row.within = row.distance <= row.bound * (1.0 + 1e-3);
    out.push_back(row);
  }
  return out;
}

std::vector<RefinementLevel> counterexample_refinement(PotentialPtr potential,
                                                       const std::vector<double>& cutoffs,
                                                       int table_points,
                                                       const GeodesicConfig& geodesic) {
  if (cutoffs.empty()) return {};
  if (table_points < 2) throw ParameterError("counterexample: need two table points");
  const double cmin = *std::min_element(cutoffs.begin(), cutoffs.end());
  if (!(cmin > 0.0) || *std::max_element(cutoffs.begin(), cutoffs.end()) >= 1.0) {
    throw ParameterError("counterexample: cutoffs must lie in (0, 1)");
  }
  // d_W / x1^6 tabulated on a geometric grid in x1, interpolated in log x1
  std::vector<double> logx, ratio;
  for (int k = 0; k < table_points; ++k) {
    const double x1 = cmin * std::pow(1.0 / cmin, double(k) / (table_points - 1));
    const Point x = make_point({x1, 0.0});
    const double d =
        well_distance(potential, x, potential->well(0, x), potential->well(1, x), geodesic);
    logx.push_back(std::log(x1));
    ratio.push_back(d / std::pow(x1, 6));
  }
  auto tension = [&](double x1) {
    const double lx = std::clamp(std::log(x1), logx.front(), logx.back());
    const auto it = std::upper_bound(logx.begin(), logx.end(), lx);
    const std::size_t k = std::clamp<std::size_t>(it - logx.begin(), 1, logx.size() - 1);
    const double t = (lx - logx[k - 1]) / (logx[k] - logx[k - 1]);
    return ((1.0 - t) * ratio[k - 1] + t * ratio[k]) * std::pow(x1, 6);
  };

  // The curve x2 = sin(x1^-2) in the variable t = x1^-2, split at multiples
  // of pi so every panel sees at most one oscillation.
  static const GaussLegendre rule(16);
  std::vector<RefinementLevel> out;
  for (double a : cutoffs) {
    RefinementLevel lvl;
    lvl.cutoff = a;
    const double tmax = 1.0 / (a * a);
    std::vector<double> breaks = {1.0};
    for (double t = M_PI; t < tmax; t += M_PI) breaks.push_back(t);
    breaks.push_back(tmax);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double lo = breaks[k], hi = breaks[k + 1];
      if (hi <= lo) continue;
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (int q = 0; q < rule.size(); ++q) {
        const double t = mid + half * rule.nodes[q];
        const double x1 = 1.0 / std::sqrt(t);
        const double slope = -2.0 * std::pow(t, 1.5) * std::cos(t);  // f'(x1)
        const double ds = std::sqrt(1.0 + slope * slope) * 0.5 * std::pow(t, -1.5);
        const Point x = make_point({x1, std::sin(t)});
        const double gap = (potential->well(0, x) - potential->well(1, x)).norm();
        lvl.weighted += rule.weights[q] * half * tension(x1) * ds;
        lvl.plain += rule.weights[q] * half * gap * ds;
      }
    }
    out.push_back(lvl);
  }
  return out;
}

}  // namespace phasegeo

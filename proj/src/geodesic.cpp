#include "phasegeo/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "phasegeo/errors.hpp"
#include "phasegeo/quadrature.hpp"

namespace phasegeo {

// --------------------------------------------------------------------------
// Curve

double Curve::length() const {
  double l = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) l += (nodes[j + 1] - nodes[j]).norm();
  return l;
}

Curve Curve::resampled(int n) const {
  n = std::max(n, 1);
  std::vector<double> arc(nodes.size(), 0.0);
  for (std::size_t j = 1; j < nodes.size(); ++j) arc[j] = arc[j - 1] + (nodes[j] - nodes[j - 1]).norm();
  Curve out;
  out.nodes.reserve(n + 1);
  const double total = arc.back();
  if (total == 0.0) {
    out.nodes.assign(n + 1, nodes.front());
    return out;
  }
  std::size_t seg = 0;
  for (int k = 0; k <= n; ++k) {
    const double target = total * k / n;
    while (seg + 2 < nodes.size() && arc[seg + 1] < target) ++seg;
    const double span = arc[seg + 1] - arc[seg];
    const double t = span > 0.0 ? std::clamp((target - arc[seg]) / span, 0.0, 1.0) : 0.0;
    out.nodes.push_back((1.0 - t) * nodes[seg] + t * nodes[seg + 1]);
  }
  out.nodes.front() = nodes.front();
  out.nodes.back() = nodes.back();
  return out;
}

Curve Curve::reversed() const {
  Curve out{nodes};
  std::reverse(out.nodes.begin(), out.nodes.end());
  return out;
}

// --------------------------------------------------------------------------
// ConformalFactor

namespace {

// gradient of 2 sqrt(W) = grad W / sqrt(W); zero on the well set
State sqrt_gradient(double w, const State& grad_w) {
  if (!(w > 1e-300)) return State::Zero(grad_w.size());
  return grad_w / std::sqrt(w);
}

}  // namespace

ConformalFactor ConformalFactor::custom(Value value, Gradient gradient) {
  ConformalFactor f;
  f.kind_ = Kind::custom;
  f.value_ = std::move(value);
  f.gradient_ = std::move(gradient);
  return f;
}

ConformalFactor ConformalFactor::point_frozen(PotentialPtr potential, const Point& x) {
  if (!potential->domain().contains(x)) throw DomainError("conformal factor: x outside domain");
  ConformalFactor f;
  f.kind_ = Kind::point_frozen;
  f.value_ = [potential, x](const State& z) { return 2.0 * std::sqrt(potential->value(x, z)); };
  f.gradient_ = [potential, x](const State& z) {
    return sqrt_gradient(potential->value(x, z), potential->gradient(x, z));
  };
  return f;
}

ConformalFactor ConformalFactor::region_minimized(PotentialPtr potential, const Box& region,
                                                  int samples_per_axis) {
  if (!potential->domain().contains(region.lo) || !potential->domain().contains(region.hi)) {
    throw DomainError("conformal factor: region outside domain");
  }
  auto xs = std::make_shared<const std::vector<Point>>(region.sample_grid(samples_per_axis));
  auto argmin = [potential, xs](const State& z) {
    std::size_t best = 0;
    double wmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < xs->size(); ++k) {
      const double w = potential->value((*xs)[k], z);
      if (w < wmin) {
        wmin = w;
        best = k;
      }
    }
    return std::make_pair(best, wmin);
  };
  ConformalFactor f;
  f.kind_ = Kind::region_minimized;
  f.value_ = [argmin](const State& z) { return 2.0 * std::sqrt(argmin(z).second); };
  f.gradient_ = [potential, xs, argmin](const State& z) {
    const auto [k, w] = argmin(z);
    return sqrt_gradient(w, potential->gradient((*xs)[k], z));
  };
  return f;
}

State ConformalFactor::gradient(const State& z) const {
  if (gradient_) return gradient_(z);
  State g(z.size());
  for (Eigen::Index c = 0; c < z.size(); ++c) {
    const double h = 1e-6 * (1.0 + std::abs(z(c)));
    State a = z, b = z;
    a(c) += h;
    b(c) -= h;
    g(c) = (value_(a) - value_(b)) / (2.0 * h);
  }
  return g;
}

// --------------------------------------------------------------------------
// Costs and initializations

namespace {

// Midpoint-rule cost with F replaced by sqrt(F^2 + mu^2); mu = 0 is the true cost.
double cost_of(const ConformalFactor& factor, const std::vector<State>& nodes,
               std::vector<State>* grad, double mu = 0.0) {
  double c = 0.0;
  if (grad) {
    grad->assign(nodes.size(), State::Zero(nodes.front().size()));
  }
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const State e = nodes[j + 1] - nodes[j];
    const double len = e.norm();
    const State mid = 0.5 * (nodes[j] + nodes[j + 1]);
    const double f0 = factor(mid);
    if (!std::isfinite(f0)) throw NumericError("geodesic: non-finite conformal factor");
    const double f = mu > 0.0 ? std::hypot(f0, mu) : f0;
    c += f * len;
    if (grad) {
      State gf = factor.gradient(mid);
      if (!gf.allFinite()) throw NumericError("geodesic: non-finite factor gradient");
      if (mu > 0.0) gf *= f0 / f;
      State contrib = 0.5 * len * gf;
      (*grad)[j] += contrib;
      (*grad)[j + 1] += contrib;
      if (len > 0.0) {
        const State t = (f / len) * e;
        (*grad)[j] -= t;
        (*grad)[j + 1] += t;
      }
    }
  }
  if (grad) {
    grad->front().setZero();
    grad->back().setZero();
  }
  return c;
}

// Splits n segments among pieces proportionally to their lengths, giving at
// least one segment to every piece of positive length.
std::vector<int> allocate(const std::vector<double>& lengths, int n) {
  std::vector<int> out(lengths.size(), 0);
  double total = 0.0;
  int positive = 0;
  for (double l : lengths) {
    total += l;
    positive += l > 0.0;
  }
  if (total == 0.0) {
    out.front() = n;
    return out;
  }
  n = std::max(n, positive);
  int used = 0;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (lengths[k] > 0.0) {
      out[k] = std::max(1, static_cast<int>(std::floor(n * lengths[k] / total)));
      used += out[k];
    }
  }
  // hand out the remainder to the longest pieces
  while (used < n) {
    std::size_t best = 0;
    double gap = -1.0;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
      const double g = n * lengths[k] / total - out[k];
      if (lengths[k] > 0.0 && g > gap) {
        gap = g;
        best = k;
      }
    }
    ++out[best];
    ++used;
  }
  while (used > n) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
      if (out[k] > out[best]) best = k;
    }
    --out[best];
    --used;
  }
  return out;
}

}  // namespace

double curve_cost(const ConformalFactor& factor, const Curve& curve) {
  if (curve.nodes.empty()) return 0.0;
  return cost_of(factor, curve.nodes, nullptr);
}

Curve segment_init(const State& p, const State& q, int n) {
  if (n < 1) throw ParameterError("segment_init: need at least one segment");
  if (p.size() != q.size()) throw ParameterError("segment_init: endpoint dimension mismatch");
  Curve c;
  c.nodes.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = double(k) / n;
    c.nodes.push_back((1.0 - t) * p + t * q);
  }
  c.nodes.front() = p;
  c.nodes.back() = q;
  return c;
}

WellProjection project_to_well(const MultiWellPotential& potential, const Box& region, int well,
                               const State& p) {
  if (well < 0 || well >= potential.num_wells()) {
    throw ParameterError("via-well: no well with index " + std::to_string(well + 1));
  }
  if (region.is_point()) {
    WellProjection out{region.lo, potential.well(well, region.lo), 0.0};
    out.distance = (p - out.z).norm();
    return out;
  }
  auto dist = [&](const Point& x) { return (p - potential.well(well, x)).norm(); };
  const int per_axis = region.dim() == 1 ? 65 : 17;
  Point best = region.lo;
  double dbest = std::numeric_limits<double>::infinity();
  for (const auto& x : region.sample_grid(per_axis)) {
    const double d = dist(x);
    if (d < dbest) {
      dbest = d;
      best = x;
    }
  }
  // coordinate-wise golden-section refinement inside one grid cell
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int a = 0; a < region.dim(); ++a) {
      const double span = region.hi(a) - region.lo(a);
      if (span == 0.0) continue;
      const double cell = span / (per_axis - 1) * (sweep == 0 ? 1.0 : 0.5);
      const double lo = std::max(region.lo(a), best(a) - cell);
      const double hi = std::min(region.hi(a), best(a) + cell);
      Point trial = best;
      auto along = [&](double t) {
        trial(a) = t;
        return dist(trial);
      };
      const double t = golden_section_minimize(along, lo, hi, 1e-12 * (1.0 + span));
      trial(a) = t;
      if (dist(trial) <= dbest) {
        best = trial;
        dbest = dist(trial);
      }
    }
  }
  return {best, potential.well(well, best), dbest};
}

Curve via_well_init(const MultiWellPotential& potential, const Box& region, const State& p,
                    const State& q, int well, int n) {
  if (n < 1) throw ParameterError("via_well_init: need at least one segment");
  const WellProjection pp = project_to_well(potential, region, well, p);
  const WellProjection qp = project_to_well(potential, region, well, q);

  constexpr int kArcSamples = 64;
  std::vector<State> arc;
  arc.reserve(kArcSamples + 1);
  for (int k = 0; k <= kArcSamples; ++k) {
    const double t = double(k) / kArcSamples;
    arc.push_back(potential.well(well, Point((1.0 - t) * pp.x + t * qp.x)));
  }
  Curve arc_curve{arc};
  const double arc_len = arc_curve.length();
  const auto counts = allocate({pp.distance, arc_len, qp.distance}, n);

  Curve out;
  out.nodes.push_back(p);
  auto append = [&](const Curve& piece) {
    for (std::size_t j = 1; j < piece.nodes.size(); ++j) out.nodes.push_back(piece.nodes[j]);
  };
  if (counts[0] > 0) append(segment_init(p, pp.z, counts[0]));
  if (counts[1] > 0) append(arc_curve.resampled(counts[1]));
  if (counts[2] > 0) append(segment_init(qp.z, q, counts[2]));
  while (out.segments() < n) out.nodes.push_back(q);  // all pieces degenerate
  out.nodes.back() = q;
  return out;
}

// --------------------------------------------------------------------------
// Descent

namespace {

// Drops the component of each interior gradient along the local chord. Moving
// nodes along the curve only reparametrizes it, and under the midpoint rule
// that freedom lets segment midpoints slide onto the zero set of F.
void normal_part(const std::vector<State>& x, std::vector<State>& g) {
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const State t = x[j + 1] - x[j - 1];
    const double tn2 = t.squaredNorm();
    if (tn2 > 0.0) g[j] -= (g[j].dot(t) / tn2) * t;
  }
}

GeodesicCandidate descend(const ConformalFactor& factor, const std::string& name, Curve init,
                          const GeodesicConfig& cfg) {
  GeodesicCandidate out;
  out.init = name;
  std::vector<State> x = std::move(init.nodes);
  out.initial_cost = cost_of(factor, x, nullptr);

  std::vector<State> best = x;
  double best_cost = out.initial_cost;
  auto keep = [&](const std::vector<State>& y) {
    const double t = cost_of(factor, y, nullptr);
    if (t < best_cost) {
      best_cost = t;
      best = y;
    }
  };
  auto norm2 = [](const std::vector<State>& v) {
    double s = 0.0;
    for (const auto& e : v) s += e.squaredNorm();
    return s;
  };
  const int n = static_cast<int>(x.size()) - 1;
  const double length = Curve{x}.length();
  const double scale = std::max(length, 1e-300) / std::max(n, 1);

  // Optimal curves run through wells, where F behaves like |z - z_i| and plain
  // gradient descent zigzags. Descend on sqrt(F^2 + mu^2) with mu shrinking
  // geometrically, then finish on F; candidates are always scored by F.
  std::vector<double> mus;
  const double fbar = length > 0.0 ? out.initial_cost / length : 0.0;
  for (int k = 1; k <= cfg.smoothing_stages && fbar > 0.0; ++k) {
    mus.push_back(fbar * std::pow(10.0, -k));
  }
  mus.push_back(0.0);

  int it = 0;
  bool converged = false;
  std::vector<State> g, g_new, trial(x.size());
  for (const double mu : mus) {
    converged = false;
    // a smoothed stage only needs to resolve cost down to its own bias, ~ (mu / fbar)^2
    const double stall = mu > 0.0 ? std::max(cfg.stall_tolerance, 1e-2 * std::pow(mu / fbar, 2))
                                  : cfg.stall_tolerance;
    double c = cost_of(factor, x, &g, mu);
    normal_part(x, g);
    double cycle_start = c;
    double step = 0.0;
    while (it < cfg.max_iterations) {
      const double gn2 = norm2(g);
      if (std::sqrt(gn2) <= cfg.gradient_tolerance * (1.0 + c)) {
        converged = true;
        break;
      }
      if (step <= 0.0) {
        double gmax = 0.0;
        for (const auto& e : g) gmax = std::max(gmax, e.norm());
        step = 0.1 * scale / gmax;
      }
      double a = step;
      double c_new = c;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] - a * g[j];
        c_new = cost_of(factor, trial, nullptr, mu);
        if (c_new <= c - 1e-4 * a * gn2) {
          accepted = true;
          break;
        }
        a *= 0.5;
      }
      ++it;
      if (!accepted) {
        // no descent along -g at any resolvable step: a numerical stationary point
        converged = true;
        break;
      }
      c_new = cost_of(factor, trial, &g_new, mu);
      normal_part(trial, g_new);
      // Barzilai-Borwein step for the next iteration
      double sy = 0.0, ss = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const State s = trial[j] - x[j];
        sy += s.dot(g_new[j] - g[j]);
        ss += s.squaredNorm();
      }
      step = sy > 0.0 ? ss / sy : 2.0 * a;
      std::swap(x, trial);
      std::swap(g, g_new);
      c = c_new;
      if (cfg.redistribute_every > 0 && it % cfg.redistribute_every == 0) {
        keep(x);
        x = Curve{x}.resampled(n).nodes;
        c = cost_of(factor, x, &g, mu);
        normal_part(x, g);
        // compare cycles at uniform arclength, where costs are commensurable
        if (cycle_start - c < stall * (1.0 + std::abs(c))) {
          converged = true;
          break;
        }
        cycle_start = c;
      }
    }
    keep(x);
  }
  out.cost = best_cost;
  out.curve.nodes = std::move(best);
  out.length = out.curve.length();
  out.iterations = it;
  out.converged = converged;
  return out;
}

}  // namespace

GeodesicResult minimize_geodesic(const ConformalFactor& factor, const State& p, const State& q,
                                 const GeodesicConfig& config,
                                 const std::vector<NamedCurve>& extra_inits) {
  if (p.size() != q.size()) throw ParameterError("geodesic: endpoint dimension mismatch");
  if (config.nodes < 1) throw ParameterError("geodesic: need at least one segment");
  std::vector<NamedCurve> inits;
  inits.push_back({"segment", segment_init(p, q, config.nodes)});
  for (const auto& c : extra_inits) inits.push_back(c);

  GeodesicResult result;
  std::vector<GeodesicCandidate> candidates;
  for (auto& init : inits) {
    init.curve.nodes.front() = p;
    init.curve.nodes.back() = q;
    candidates.push_back(descend(factor, init.name, std::move(init.curve), config));
    result.initial_costs.push_back(candidates.back().initial_cost);
  }
  std::size_t win = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const auto& a = candidates[k];
    const auto& b = candidates[win];
    const double tie = 1e-12 * (1.0 + b.cost);
    if (a.cost < b.cost - tie || (std::abs(a.cost - b.cost) <= tie && a.length < b.length)) {
      win = k;
    }
  }
  const auto& w = candidates[win];
  result.cost = w.cost;
  result.curve = w.curve;
  result.length = w.length;
  result.iterations = w.iterations;
  result.winner = w.init;
  result.converged = w.converged;
  if (config.verbose) result.candidates = std::move(candidates);
  return result;
}

namespace {

std::vector<NamedCurve> well_inits(const MultiWellPotential& potential, const Box& region,
                                   const State& p, const State& q, const GeodesicConfig& cfg) {
  std::vector<NamedCurve> out;
  if (!cfg.via_well_inits) return out;
  for (int i = 0; i < potential.num_wells(); ++i) {
    out.push_back({"via-well-" + std::to_string(i + 1),
                   via_well_init(potential, region, p, q, i, cfg.nodes)});
  }
  return out;
}

}  // namespace

namespace {

// The discrete problem is symmetric under reversing the curve, but descent
// from the two orientations rounds differently. Distances are solved with the
// endpoints in lexicographic order so that d(p, q) == d(q, p) exactly.
bool backwards(const State& p, const State& q) {
  return std::lexicographical_compare(q.begin(), q.end(), p.begin(), p.end());
}

GeodesicResult flipped(GeodesicResult r) {
  r.curve = r.curve.reversed();
  for (auto& c : r.candidates) c.curve = c.curve.reversed();
  return r;
}

}  // namespace

GeodesicResult geodesic_distance(PotentialPtr potential, const Point& x, const State& p,
                                 const State& q, const GeodesicConfig& config) {
  if (!potential->domain().contains(x)) throw DomainError("d_W: x outside the closed domain");
  if (p.size() != potential->state_dim() || q.size() != potential->state_dim()) {
    throw ParameterError("d_W: state dimension mismatch");
  }
  if (backwards(p, q)) return flipped(geodesic_distance(potential, x, q, p, config));
  const auto factor = ConformalFactor::point_frozen(potential, x);
  return minimize_geodesic(factor, p, q, config,
                           well_inits(*potential, Box::point(x), p, q, config));
}

GeodesicResult region_distance(PotentialPtr potential, const Box& region, const State& p,
                               const State& q, const GeodesicConfig& config,
                               int samples_per_axis) {
  if (region.is_point()) return geodesic_distance(potential, region.lo, p, q, config);
  if (backwards(p, q)) {
    return flipped(region_distance(potential, region, q, p, config, samples_per_axis));
  }
  const auto factor = ConformalFactor::region_minimized(potential, region, samples_per_axis);
  return minimize_geodesic(factor, p, q, config, well_inits(*potential, region, p, q, config));
}

double scalar_distance(const MultiWellPotential& potential, const Point& x, double p, double q) {
  if (potential.state_dim() != 1) throw ParameterError("scalar_distance: needs M = 1");
  if (!potential.domain().contains(x)) throw DomainError("scalar_distance: x outside domain");
  const double lo = std::min(p, q), hi = std::max(p, q);
  std::vector<double> cuts = {lo};
  for (int i = 0; i < potential.num_wells(); ++i) {
    const double z = potential.well(i, x)(0);
    if (z > lo && z < hi) cuts.push_back(z);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  static const GaussLegendre rule(16);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += rule.integrate_composite(
        [&](double u) { return std::sqrt(potential.value(x, make_state({u}))); }, cuts[k],
        cuts[k + 1], 64);
  }
  return 2.0 * total;
}

}  // namespace phasegeo

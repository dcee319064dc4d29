#include "phasegeo/phasefield.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "phasegeo/errors.hpp"

namespace phasegeo {

// --------------------------------------------------------------------------
// Grid and Field

Grid::Grid(Box box, int nx, int ny) : box_(std::move(box)), nx_(nx), ny_(ny) {
  if (box_.dim() < 1 || box_.dim() > 2) throw ParameterError("grid: dimension must be 1 or 2");
  if (box_.dim() == 1) ny_ = 1;
  if (nx_ < 2 || (box_.dim() == 2 && ny_ < 2)) throw ParameterError("grid: need two points per axis");
  hx_ = (box_.hi(0) - box_.lo(0)) / (nx_ - 1);
  hy_ = box_.dim() == 2 ? (box_.hi(1) - box_.lo(1)) / (ny_ - 1) : 1.0;
  if (!(hx_ > 0.0) || !(hy_ > 0.0)) throw ParameterError("grid: box must have positive extent");
  weights_.resize(size());
  for (int j = 0; j < ny_; ++j) {
    const double wy = box_.dim() == 2 ? ((j == 0 || j == ny_ - 1) ? 0.5 * hy_ : hy_) : 1.0;
    for (int i = 0; i < nx_; ++i) {
      const double wx = (i == 0 || i == nx_ - 1) ? 0.5 * hx_ : hx_;
      weights_[index(i, j)] = wx * wy;
    }
  }
}

Grid Grid::with_spacing(const Box& box, double h) {
  if (!(h > 0.0)) throw ParameterError("grid: spacing must be positive");
  auto count = [&](int a) {
    return static_cast<int>(std::ceil((box.hi(a) - box.lo(a)) / h - 1e-9)) + 1;
  };
  return box.dim() == 1 ? Grid(box, count(0)) : Grid(box, count(0), count(1));
}

Point Grid::point(int k) const {
  const int i = k % nx_, j = k / nx_;
  if (dim() == 1) return make_point({box_.lo(0) + i * hx_});
  return make_point({box_.lo(0) + i * hx_, box_.lo(1) + j * hy_});
}

bool Grid::on_boundary(int k) const {
  const int i = k % nx_, j = k / nx_;
  if (i == 0 || i == nx_ - 1) return true;
  return dim() == 2 && (j == 0 || j == ny_ - 1);
}

Field Field::sample(const Grid& grid, const std::function<State(const Point&)>& f) {
  Field out;
  out.grid = grid;
  const State first = f(grid.point(0));
  out.values.resize(first.size(), grid.size());
  for (int k = 0; k < grid.size(); ++k) out.values.col(k) = f(grid.point(k));
  return out;
}

void Field::set_dirichlet(const std::function<State(const Point&)>& g) {
  boundary = BoundaryKind::dirichlet;
  trace = Eigen::MatrixXd::Zero(values.rows(), values.cols());
  for (int k = 0; k < grid.size(); ++k) {
    if (!grid.on_boundary(k)) continue;
    const State v = g(grid.point(k));
    if (v.size() != values.rows()) throw ParameterError("dirichlet: trace dimension mismatch");
    trace.col(k) = v;
  }
  apply_trace();
}

void Field::apply_trace() {
  if (boundary != BoundaryKind::dirichlet) return;
  for (int k = 0; k < grid.size(); ++k) {
    if (grid.on_boundary(k)) values.col(k) = trace.col(k);
  }
}

State Field::integral() const {
  const auto& w = grid.weights();
  State s = State::Zero(values.rows());
  for (int k = 0; k < grid.size(); ++k) s += w[k] * values.col(k);
  return s;
}

void Field::project_mass() {
  if (!mass) return;
  const State shift = (*mass - integral()) / grid.box().volume();
  values.colwise() += Eigen::VectorXd(shift);
}

double grid_inner(const Grid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto& w = grid.weights();
  double s = 0.0;
  for (int k = 0; k < grid.size(); ++k) s += w[k] * a.col(k).dot(b.col(k));
  return s;
}

// --------------------------------------------------------------------------
// Energy and gradient

namespace {

// Visits every grid edge as (a, b, c) with edge term c |u_b - u_a|^2.
template <typename F>
void for_each_edge(const Grid& g, F&& f) {
  if (g.dim() == 1) {
    for (int i = 0; i + 1 < g.nx(); ++i) f(i, i + 1, 1.0 / g.hx());
    return;
  }
  for (int j = 0; j < g.ny(); ++j) {
    const double wy = (j == 0 || j == g.ny() - 1) ? 0.5 * g.hy() : g.hy();
    for (int i = 0; i + 1 < g.nx(); ++i) f(g.index(i, j), g.index(i + 1, j), wy / g.hx());
  }
  for (int i = 0; i < g.nx(); ++i) {
    const double wx = (i == 0 || i == g.nx() - 1) ? 0.5 * g.hx() : g.hx();
    for (int j = 0; j + 1 < g.ny(); ++j) f(g.index(i, j), g.index(i, j + 1), wx / g.hy());
  }
}

double energy_where(const MultiWellPotential& pot, const Field& f, double eps,
                    const std::function<bool(double)>& keep_x) {
  if (!(eps > 0.0)) throw ParameterError("energy: epsilon must be positive");
  const Grid& g = f.grid;
  const auto& w = g.weights();
  double bulk = 0.0, grad = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const Point x = g.point(k);
    if (keep_x && !keep_x(x(0))) continue;
    bulk += w[k] * pot.value(x, f.values.col(k));
  }
  for_each_edge(g, [&](int a, int b, double c) {
    if (keep_x && !keep_x(0.5 * (g.point(a)(0) + g.point(b)(0)))) return;
    grad += c * (f.values.col(b) - f.values.col(a)).squaredNorm();
  });
  const double e = bulk / eps + eps * grad;
  if (!std::isfinite(e)) throw NumericError("energy: non-finite value");
  return e;
}

}  // namespace

double energy(const MultiWellPotential& potential, const Field& field, double epsilon) {
  return energy_where(potential, field, epsilon, {});
}

Eigen::MatrixXd energy_gradient(const MultiWellPotential& potential, const Field& field,
                                double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("energy_gradient: epsilon must be positive");
  const Grid& g = field.grid;
  const auto& w = g.weights();
  Eigen::MatrixXd out(field.values.rows(), field.values.cols());
  for (int k = 0; k < g.size(); ++k) {
    out.col(k) = (w[k] / epsilon) * potential.gradient(g.point(k), field.values.col(k));
  }
  for_each_edge(g, [&](int a, int b, double c) {
    const Eigen::VectorXd d = (2.0 * epsilon * c) * (field.values.col(b) - field.values.col(a));
    out.col(a) -= d;
    out.col(b) += d;
  });
  for (int k = 0; k < g.size(); ++k) {
    if (field.boundary == BoundaryKind::dirichlet && g.on_boundary(k)) {
      out.col(k).setZero();
    } else {
      out.col(k) /= w[k];
    }
  }
  if (!out.allFinite()) throw NumericError("energy_gradient: non-finite value");
  return out;
}

double hessian_bound(const MultiWellPotential& potential, const Field& field) {
  const Grid& g = field.grid;
  const int m = field.state_dim();
  double bound = 0.0;
  auto probe = [&](const Point& x, const State& p) {
    Eigen::MatrixXd j(m, m);
    for (int c = 0; c < m; ++c) {
      const double h = 1e-5 * (1.0 + std::abs(p(c)));
      State a = p, b = p;
      a(c) += h;
      b(c) -= h;
      j.col(c) = (potential.gradient(x, a) - potential.gradient(x, b)) / (2.0 * h);
    }
    bound = std::max(bound, j.norm());
  };
  const int stride = std::max(1, g.size() / 2000);
  for (int k = 0; k < g.size(); k += stride) {
    const Point x = g.point(k);
    probe(x, field.values.col(k));
    for (int i = 0; i < potential.num_wells(); ++i) probe(x, potential.well(i, x));
  }
  return std::max(bound, 1e-12);
}

// --------------------------------------------------------------------------
// Gradient flow

MinimizeResult minimize(const MultiWellPotential& potential, Field init, double epsilon,
                        const MinimizeConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(epsilon > 0.0)) throw ParameterError("minimize: epsilon must be positive");
  if (init.mass && init.boundary == BoundaryKind::dirichlet) {
    throw ParameterError("minimize: mass and Dirichlet constraints cannot be combined");
  }
  MinimizeResult res;
  Field& u = init;
  u.apply_trace();
  auto mass_error = [&](const Field& f) {
    return f.mass ? (f.integral() - *f.mass).cwiseAbs().maxCoeff() : 0.0;
  };
  u.project_mass();
  res.max_mass_error = mass_error(u);

  const Grid& g = u.grid;
  const double hmin = g.dim() == 2 ? std::min(g.hx(), g.hy()) : g.hx();
  double dt = config.dt;
  if (dt <= 0.0) {
    dt = std::min(hmin * hmin / (8.0 * epsilon), epsilon / (2.0 * hessian_bound(potential, u)));
  }
  const double dt_floor = dt * 1e-12;
  double e = energy(potential, u, epsilon);

  Field trial = u;
  int it = 0;
  while (it < config.max_iterations) {
    const Eigen::MatrixXd grad = energy_gradient(potential, u, epsilon);
    if (grad.isZero(0.0)) {
      res.converged = true;
      break;
    }
    trial.values = u.values - dt * grad;
    trial.apply_trace();
    trial.project_mass();
    const double et = energy(potential, trial, epsilon);
    const double scale = std::max(1.0, std::abs(e));
    if (et > e) {
      if (et - e <= 1e-14 * scale) {
        // stationary up to rounding
        res.converged = true;
        break;
      }
      dt *= 0.5;
      if (dt < dt_floor) {
        throw StalledError("minimize: time step underflow at iteration " + std::to_string(it) +
                           " (energy " + std::to_string(e) + ", dt " + std::to_string(dt) + ")");
      }
      continue;
    }
    ++it;
    res.max_mass_error = std::max(res.max_mass_error, mass_error(trial));
    const double rate = (e - et) / (dt * scale);
    std::swap(u.values, trial.values);
    e = et;
    if (config.record_trace) res.energy_trace.push_back(e);
    if (rate < config.tolerance) {
      res.converged = true;
      break;
    }
  }
  res.field = std::move(u);
  res.energy = e;
  res.iterations = it;
  res.dt = dt;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// --------------------------------------------------------------------------
// Layers and recovery

namespace {

struct Layout {
  double x0 = 0.0;     // frozen point of the geodesic
  double start = 0.0;  // profile occupies [start, start + tau]
  double match = 0.0;  // matching-layer width on each side (0: none)
};

Field layer_field(const MultiWellPotential& pot, const Grid& grid, const TransitionProfile& prof,
                  int left, int right, const Layout& lay) {
  const Point xf = make_point({lay.x0});
  const State zl0 = pot.well(left, xf), zr0 = pot.well(right, xf);
  const double a = lay.start, b = lay.start + prof.tau();
  return Field::sample(grid, [&](const Point& x) -> State {
    const double s = x(0);
    if (s < a - lay.match) return pot.well(left, x);
    if (s < a) {
      const double th = (s - (a - lay.match)) / lay.match;
      return (1.0 - th) * pot.well(left, x) + th * zl0;
    }
    if (s <= b) return prof.u(s - a);
    if (s < b + lay.match) {
      const double th = (s - b) / lay.match;
      return (1.0 - th) * zr0 + th * pot.well(right, x);
    }
    return pot.well(right, x);
  });
}

TransitionProfile frozen_profile(PotentialPtr pot, const Point& x0, int left, int right,
                                 double eps, const GeodesicConfig& gcfg, double* cost) {
  if (left == right) throw ParameterError("layer: labels must differ");
  if (left < 0 || right < 0 || left >= pot->num_wells() || right >= pot->num_wells()) {
    throw ParameterError("layer: label out of range");
  }
  const GeodesicResult gr =
      geodesic_distance(pot, x0, pot->well(left, x0), pot->well(right, x0), gcfg);
  if (cost) *cost = gr.cost;
  return build_profile(pot, x0, gr.curve, eps, default_lambda(eps));
}

}  // namespace

LayerField recovery_sequence_1d(PotentialPtr potential, const Grid& grid, double x0, int left,
                                int right, double epsilon, const GeodesicConfig& geodesic) {
  if (grid.dim() != 1) throw ParameterError("recovery: needs a 1D grid");
  const Box& box = grid.box();
  if (!(x0 > box.lo(0) && x0 < box.hi(0))) throw GeometryError("recovery: x0 not interior");
  LayerField out{Field{}, TransitionProfile{}, x0, 0.0};
  out.profile = frozen_profile(potential, make_point({x0}), left, right, epsilon, geodesic,
                               &out.geodesic_cost);
  const double tau = out.profile.tau();
  if (x0 - epsilon < box.lo(0) || x0 + tau + epsilon > box.hi(0)) {
    throw GeometryError("recovery: layer of width tau + 2 eps = " +
                        std::to_string(tau + 2.0 * epsilon) + " does not fit around x0");
  }
  out.field = layer_field(*potential, grid, out.profile, left, right, {x0, x0, epsilon});
  return out;
}

double matching_layer_energy(const MultiWellPotential& potential, const LayerField& layer,
                             double epsilon) {
  const double a = layer.start, b = layer.start + layer.profile.tau();
  return energy_where(potential, layer.field, epsilon, [&](double s) {
    return (s >= a - epsilon && s <= a) || (s >= b && s <= b + epsilon);
  });
}

// --------------------------------------------------------------------------
// Interfaces and diagnostics

double interface_location_1d(const Field& field) {
  const Grid& g = field.grid;
  if (g.dim() != 1) throw ParameterError("interface_location_1d: needs a 1D field");
  int best = 0;
  double jump = -1.0;
  for (int i = 0; i + 1 < g.nx(); ++i) {
    const double d = (field.values.col(i + 1) - field.values.col(i)).norm();
    if (d > jump * (1.0 + 1e-12)) {
      jump = d;
      best = i;
    }
  }
  return g.box().lo(0) + (best + 0.5) * g.hx();
}

std::vector<double> phase_indicator(PotentialPtr potential, const Field& field, int i, int j,
                                    const GeodesicConfig& geodesic) {
  const Grid& g = field.grid;
  const int n = g.size();
  std::vector<double> out(n, 0.0);
  if (field.state_dim() == 1) {
    for (int k = 0; k < n; ++k) {
      const Point x = g.point(k);
      const double zi = potential->well(i, x)(0), zj = potential->well(j, x)(0);
      const double full = scalar_distance(*potential, x, zi, zj);
      out[k] = scalar_distance(*potential, x, zi, field.values(0, k)) / full;
    }
    return out;
  }
  // nearest-well labels; geodesics only in the band where labels change
  std::vector<int> label(n);
  for (int k = 0; k < n; ++k) {
    const Point x = g.point(k);
    double best = std::numeric_limits<double>::infinity();
    for (int w = 0; w < potential->num_wells(); ++w) {
      const double d = (field.values.col(k) - Eigen::VectorXd(potential->well(w, x))).norm();
      if (d < best) {
        best = d;
        label[k] = w;
      }
    }
  }
  auto band = [&](int k) {
    const int a = k % g.nx(), b = k / g.nx();
    for (auto [da, db] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      const int na = a + da, nb = b + db;
      if (na < 0 || na >= g.nx() || nb < 0 || nb >= g.ny()) continue;
      if (label[g.index(na, nb)] != label[k]) return true;
    }
    return false;
  };
  GeodesicConfig cfg = geodesic;
  cfg.nodes = std::min(cfg.nodes, 32);
  for (int k = 0; k < n; ++k) {
    if (!band(k)) {
      out[k] = label[k] == j ? 1.0 : 0.0;
      continue;
    }
    const Point x = g.point(k);
    const State zi = potential->well(i, x), zj = potential->well(j, x);
    const double full = geodesic_distance(potential, x, zi, zj, cfg).cost;
    out[k] = geodesic_distance(potential, x, zi, State(field.values.col(k)), cfg).cost / full;
  }
  return out;
}

double level_set_length(const Grid& g, const std::vector<double>& v, double level) {
  if (g.dim() != 2) throw ParameterError("level_set_length: needs a 2D grid");
  double total = 0.0;
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      // corners counter-clockwise from (i, j)
      const double c[4] = {v[g.index(i, j)] - level, v[g.index(i + 1, j)] - level,
                           v[g.index(i + 1, j + 1)] - level, v[g.index(i, j + 1)] - level};
      const double px[4] = {0.0, g.hx(), g.hx(), 0.0};
      const double py[4] = {0.0, 0.0, g.hy(), g.hy()};
      std::vector<std::pair<double, double>> cut;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((c[e] < 0.0) != (c[f] < 0.0)) {
          const double t = c[e] / (c[e] - c[f]);
          cut.emplace_back(px[e] + t * (px[f] - px[e]), py[e] + t * (py[f] - py[e]));
        }
      }
      auto seg = [&](int a, int b) {
        return std::hypot(cut[a].first - cut[b].first, cut[a].second - cut[b].second);
      };
      if (cut.size() == 2) {
        total += seg(0, 1);
      } else if (cut.size() == 4) {
        // saddle: pair crossings according to the sign of the cell average
        const double mean = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        total += (mean < 0.0) == (c[0] < 0.0) ? seg(0, 3) + seg(1, 2) : seg(0, 1) + seg(2, 3);
      }
    }
  }
  return total;
}

State gibbs_thomson_estimate(const MultiWellPotential& potential, const Field& field,
                             double epsilon) {
  Field free = field;
  free.boundary = BoundaryKind::natural;
  const Eigen::MatrixXd grad = energy_gradient(potential, free, epsilon);
  const auto& w = field.grid.weights();
  State s = State::Zero(field.state_dim());
  for (int k = 0; k < field.grid.size(); ++k) s += w[k] * grad.col(k);
  return s / field.grid.box().volume();
}

Field resample(const Field& field, const Grid& grid) {
  const Grid& src = field.grid;
  if (src.dim() != grid.dim()) throw ParameterError("resample: dimension mismatch");
  auto locate = [](double x, double lo, double h, int n) {
    const double f = std::clamp((x - lo) / h, 0.0, double(n - 1));
    const int i = std::min(static_cast<int>(f), n - 2);
    return std::make_pair(i, f - i);
  };
  Field out = field;
  out.grid = grid;
  out.values.resize(field.values.rows(), grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const Point x = grid.point(k);
    const auto [i, tx] = locate(x(0), src.box().lo(0), src.hx(), src.nx());
    if (grid.dim() == 1) {
      out.values.col(k) = (1.0 - tx) * field.values.col(i) + tx * field.values.col(i + 1);
      continue;
    }
    const auto [j, ty] = locate(x(1), src.box().lo(1), src.hy(), src.ny());
    out.values.col(k) = (1.0 - tx) * (1.0 - ty) * field.values.col(src.index(i, j)) +
                        tx * (1.0 - ty) * field.values.col(src.index(i + 1, j)) +
                        (1.0 - tx) * ty * field.values.col(src.index(i, j + 1)) +
                        tx * ty * field.values.col(src.index(i + 1, j + 1));
  }
  if (out.boundary == BoundaryKind::dirichlet) {
    Field tr = field;
    tr.values = field.trace;
    tr.boundary = BoundaryKind::natural;
    out.trace = resample(tr, grid).values;
    out.apply_trace();
  }
  return out;
}

// --------------------------------------------------------------------------
// Sweeps

namespace {

Field initial_field(PotentialPtr pot, const SweepScenario& sc, const Grid& grid, double eps) {
  const Box& box = grid.box();
  const int dim = grid.dim();
  const bool inside = dim == 1 ? (sc.position > box.lo(0) && sc.position < box.hi(0))
                               : (sc.radius > 0.0 || (sc.position > box.lo(0) && sc.position < box.hi(0)));
  if (!inside) {
    return Field::sample(grid, [&](const Point& x) { return pot->well(sc.left, x); });
  }
  const Point x0 = dim == 1 ? make_point({sc.position}) : box.center();
  const TransitionProfile prof = frozen_profile(pot, x0, sc.left, sc.right, eps, {}, nullptr);
  const double tau = prof.tau();
  // signed distance, positive on the `right` side
  auto signed_distance = [&](const Point& x) {
    if (dim == 2 && sc.radius > 0.0) return sc.radius - (x - box.center()).norm();
    return x(0) - sc.position;
  };
  return Field::sample(grid, [&](const Point& x) -> State {
    const double s = signed_distance(x);
    if (s <= -0.5 * tau) return pot->well(sc.left, x);
    if (s >= 0.5 * tau) return pot->well(sc.right, x);
    return prof.u(s + 0.5 * tau);
  });
}

SweepRow run_row(const MultiWellPotential& pot, const SweepScenario& sc, Field init, double eps,
                 const std::optional<State>& mass, Field* keep) {
  if (sc.constraint == ConstraintKind::dirichlet) {
    if (!sc.dirichlet) throw ParameterError("sweep: Dirichlet scenario without boundary data");
    init.set_dirichlet(sc.dirichlet);
  } else {
    init.boundary = BoundaryKind::natural;
  }
  init.mass = sc.constraint == ConstraintKind::mass ? mass : std::nullopt;
  MinimizeResult r = minimize(pot, std::move(init), eps, sc.minimize);
  SweepRow row;
  row.epsilon = eps;
  row.energy = r.energy;
  row.iterations = r.iterations;
  row.seconds = r.seconds;
  row.h = r.field.grid.h();
  row.converged = r.converged;
  row.max_mass_error = r.max_mass_error;
  if (keep) *keep = std::move(r.field);
  return row;
}

}  // namespace

SweepRecord epsilon_sweep(PotentialPtr potential, const SweepScenario& scenario,
                          const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw ParameterError("sweep: empty epsilon list");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw ParameterError("sweep: epsilons must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw ParameterError("sweep: epsilons must be strictly decreasing");
    }
  }
  if (!(scenario.h_over_eps > 0.0) || scenario.h_over_eps > 0.2 + 1e-12) {
    throw ParameterError("sweep: h / eps must lie in (0, 0.2]");
  }
  const Box& box = potential->domain();
  const int n = static_cast<int>(epsilons.size());
  std::vector<Grid> grids;
  for (double e : epsilons) grids.push_back(Grid::with_spacing(box, scenario.h_over_eps * e));

  std::optional<State> mass = scenario.mass;
  if (scenario.constraint == ConstraintKind::mass && !mass) {
    mass = initial_field(potential, scenario, grids[0], epsilons[0]).integral();
  }

  SweepRecord rec;
  rec.rows.resize(n);
  std::vector<Field> finals(n);
  auto interface_of = [&](const Field& f) {
    if (f.grid.dim() == 1) return interface_location_1d(f);
    return level_set_length(f.grid, phase_indicator(potential, f, scenario.left, scenario.right));
  };

  if (scenario.warm_start) {
    Field prev;
    for (int k = 0; k < n; ++k) {
      Field init = k == 0 ? initial_field(potential, scenario, grids[0], epsilons[0])
                          : resample(prev, grids[k]);
      rec.rows[k] = run_row(*potential, scenario, std::move(init), epsilons[k], mass, &prev);
      rec.rows[k].interface = interface_of(prev);
      if (k == n - 1) rec.last = prev;
    }
    return rec;
  }

  const int threads = std::clamp(scenario.threads, 1, n);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (int k = next++; k < n; k = next++) {
      try {
        Field init = initial_field(potential, scenario, grids[k], epsilons[0]);
        rec.rows[k] = run_row(*potential, scenario, std::move(init), epsilons[k], mass, &finals[k]);
        rec.rows[k].interface = interface_of(finals[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  rec.last = std::move(finals.back());
  return rec;
}

}  // namespace phasegeo

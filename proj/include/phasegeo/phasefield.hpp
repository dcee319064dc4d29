#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phasegeo/box.hpp"
#include "phasegeo/geodesic.hpp"
#include "phasegeo/potential.hpp"
#include "phasegeo/profile.hpp"

namespace phasegeo {

/// Uniform tensor grid on a 1D or 2D box, points ordered with x fastest.
class Grid {
 public:
  Grid() = default;
  Grid(Box box, int nx, int ny = 1);
  /// Grid with spacing at most h on every axis.
  static Grid with_spacing(const Box& box, double h);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int size() const { return nx_ * ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  /// Largest spacing.
  double h() const { return std::max(hx_, dim() == 2 ? hy_ : 0.0); }
  int index(int i, int j = 0) const { return j * nx_ + i; }
  Point point(int k) const;
  bool on_boundary(int k) const;
  /// Trapezoidal quadrature weights; they sum to the box volume.
  const std::vector<double>& weights() const { return weights_; }

 private:
  Box box_;
  int nx_ = 0, ny_ = 1;
  double hx_ = 0.0, hy_ = 0.0;
  std::vector<double> weights_;
};

enum class BoundaryKind { natural, dirichlet };

/// Grid-sampled map u: domain -> R^M, one column per grid point.
struct Field {
  Grid grid;
  Eigen::MatrixXd values;  // M x grid.size()
  BoundaryKind boundary = BoundaryKind::natural;
  /// Dirichlet trace at boundary nodes (same shape as values; only boundary
  /// columns are meaningful).
  Eigen::MatrixXd trace;
  std::optional<State> mass;

  int state_dim() const { return static_cast<int>(values.rows()); }
  State at(int k) const { return values.col(k); }
  /// Sets every column to the value of f at the node.
  static Field sample(const Grid& grid, const std::function<State(const Point&)>& f);
  /// Freezes boundary nodes to g and marks the field as Dirichlet.
  void set_dirichlet(const std::function<State(const Point&)>& g);
  /// Re-imposes the Dirichlet trace.
  void apply_trace();
  /// Integral of u (trapezoidal).
  State integral() const;
  /// Shifts u by (mass - integral) / |domain|.
  void project_mass();
};

/// Weighted inner product sum_k w_k <a_k, b_k> on a grid.
double grid_inner(const Grid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Discrete F_eps: trapezoidal sum of W(x, u) / eps plus eps |grad_h u|^2 from
/// forward differences on grid edges.
double energy(const MultiWellPotential& potential, const Field& field, double epsilon);

/// Discrete L^2 gradient of `energy` with respect to the weighted inner
/// product; Dirichlet rows are zero.
Eigen::MatrixXd energy_gradient(const MultiWellPotential& potential, const Field& field,
                                double epsilon);

/// Sampled bound on the operator norm of the p-Hessian of W over the given
/// states and a neighbourhood of the wells.
double hessian_bound(const MultiWellPotential& potential, const Field& field);

struct MinimizeConfig {
  int max_iterations = 400000;
  /// Stop when the energy decrease per unit flow time, relative to
  /// max(1, energy), drops below this value.
  double tolerance = 1e-9;
  /// Explicit step; 0 selects min(h^2 / (8 eps), eps / (2 L_W)).
  double dt = 0.0;
  bool record_trace = true;
};

struct MinimizeResult {
  Field field;
  double energy = 0.0;
  int iterations = 0;
  double dt = 0.0;
  bool converged = false;
  double max_mass_error = 0.0;
  std::vector<double> energy_trace;  // energy after every accepted step
  double seconds = 0.0;
};

/// Explicit gradient flow with Dirichlet re-imposition and the additive mass
/// shift after every step; the step is halved whenever the energy would rise.
MinimizeResult minimize(const MultiWellPotential& potential, Field init, double epsilon,
                        const MinimizeConfig& config = {});

/// Field that equals z_i left of the layer and z_j right of it, with a
/// profile of the geodesic at frozen x0 inserted across [start, start + tau].
struct LayerField {
  Field field;
  TransitionProfile profile;
  double start = 0.0;
  double geodesic_cost = 0.0;
};

/// 1D recovery field: profile across [x0, x0 + tau] (lambda = eps^(3/4)),
/// linear matching layers of width eps from the frozen well values z(x0) to
/// the moving ones on both sides.
LayerField recovery_sequence_1d(PotentialPtr potential, const Grid& grid, double x0, int left,
                                int right, double epsilon,
                                const GeodesicConfig& geodesic = {});

/// Energy of the recovery field restricted to the two matching layers.
double matching_layer_energy(const MultiWellPotential& potential, const LayerField& layer,
                             double epsilon);

enum class ConstraintKind { none, mass, dirichlet };

struct SweepScenario {
  std::string name;
  ConstraintKind constraint = ConstraintKind::mass;
  /// Mass target; defaults to the integral of the initial field.
  std::optional<State> mass;
  /// Dirichlet data at the two ends (1D) or on the whole boundary (2D).
  std::function<State(const Point&)> dirichlet;
  int left = 0;   // label on the low side of the initial interface
  int right = 1;  // label on the high side
  /// Initial interface: x = position in 1D; in 2D a vertical line x = position
  /// or, when radius > 0, a circle of that radius around the box center
  /// (label `right` inside).
  double position = 0.0;
  double radius = 0.0;
  /// Spacing h = h_over_eps * eps (must be <= 0.2).
  double h_over_eps = 0.2;
  bool warm_start = true;
  int threads = 1;  // rows run concurrently only without warm starts
  MinimizeConfig minimize;
};

struct SweepRow {
  double epsilon = 0.0;
  double energy = 0.0;
  double interface = 0.0;  // 1D: location; 2D: length of the interface
  int iterations = 0;
  double seconds = 0.0;
  double h = 0.0;
  bool converged = false;
  double max_mass_error = 0.0;
};

struct SweepRecord {
  std::vector<SweepRow> rows;  // decreasing epsilon
  Field last;                  // minimizer at the smallest epsilon
};

SweepRecord epsilon_sweep(PotentialPtr potential, const SweepScenario& scenario,
                          const std::vector<double>& epsilons);

/// 1D: midpoint of the grid edge with the largest |u_{k+1} - u_k| (ties to
/// the smaller x).
double interface_location_1d(const Field& field);

/// Phase indicator d_W(x, z_i(x), u) / d_W(x, z_i(x), z_j(x)) at every node.
/// M = 1 uses the scalar closed form; otherwise geodesics are solved only
/// where a neighbouring node is closer to a different well.
std::vector<double> phase_indicator(PotentialPtr potential, const Field& field, int i, int j,
                                    const GeodesicConfig& geodesic = {});

/// Length of the 1/2-level set of a nodal scalar on a 2D grid (marching
/// squares with linear interpolation).
double level_set_length(const Grid& grid, const std::vector<double>& values, double level = 0.5);

/// Mean over the domain of the unconstrained L^2 gradient; the multiplier of
/// the mass constraint. Diagnostic only.
State gibbs_thomson_estimate(const MultiWellPotential& potential, const Field& field,
                             double epsilon);

/// Linear interpolation of a field onto another grid (warm starts).
Field resample(const Field& field, const Grid& grid);

}  // namespace phasegeo

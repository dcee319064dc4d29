#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasegeo/box.hpp"
#include "phasegeo/potential.hpp"
#include "phasegeo/types.hpp"

namespace phasegeo {

/// Polyline p_0, ..., p_n in state space; the discrete admissible curve
/// joining p_0 to p_n.
struct Curve {
  std::vector<State> nodes;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }
  const State& front() const { return nodes.front(); }
  const State& back() const { return nodes.back(); }
  /// Euclidean length.
  double length() const;
  /// Same endpoints, `n` segments of equal arclength.
  Curve resampled(int n) const;
  Curve reversed() const;
};

/// Nonnegative conformal factor F on state space.
class ConformalFactor {
 public:
  enum class Kind { point_frozen, region_minimized, custom };
  using Value = std::function<double(const State&)>;
  using Gradient = std::function<State(const State&)>;

  /// Without a gradient, central differences of `value` are used.
  static ConformalFactor custom(Value value, Gradient gradient = {});
  /// F(z) = 2 sqrt(W(x, z)) at a frozen point x.
  static ConformalFactor point_frozen(PotentialPtr potential, const Point& x);
  /// F(z) = min over a grid of x in `region` of 2 sqrt(W(x, z)).
  static ConformalFactor region_minimized(PotentialPtr potential, const Box& region,
                                          int samples_per_axis = 9);

  double operator()(const State& z) const { return value_(z); }
  State gradient(const State& z) const;
  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::custom;
  Value value_;
  Gradient gradient_;
};

/// Midpoint-rule cost sum_j F((p_j + p_{j+1}) / 2) |p_{j+1} - p_j|.
double curve_cost(const ConformalFactor& factor, const Curve& curve);

/// n + 1 equally spaced nodes on the segment from p to q.
Curve segment_init(const State& p, const State& q, int n);

/// Closest point of the well image z_i(region) to p, with its preimage.
struct WellProjection {
  Point x;
  State z;
  double distance = 0.0;
};
WellProjection project_to_well(const MultiWellPotential& potential, const Box& region, int well,
                               const State& p);

/// Segment from p to its projection p' on z_i(region), the image of the
/// straight line between the preimages of p' and q', then the segment from
/// q' to q. For a point region the middle arc collapses to z_i(x).
Curve via_well_init(const MultiWellPotential& potential, const Box& region, const State& p,
                    const State& q, int well, int n);

struct GeodesicConfig {
  int nodes = 128;
  int max_iterations = 5000;
  /// Stop when |grad| <= gradient_tolerance * (1 + cost).
  double gradient_tolerance = 1e-8;
  /// Node redistribution to uniform arclength every this many iterations.
  int redistribute_every = 25;
  /// Stop a stage when a full redistribution cycle improves the cost at
  /// uniform arclength by less than stall_tolerance * (1 + cost).
  double stall_tolerance = 1e-11;
  /// Number of smoothed stages run before the final descent on F itself.
  int smoothing_stages = 3;
  /// Include the via-well initializations (one per well) in d_W solves.
  bool via_well_inits = true;
  /// Keep every candidate in the result.
  bool verbose = false;
};

struct GeodesicCandidate {
  std::string init;
  double initial_cost = 0.0;
  double cost = 0.0;
  double length = 0.0;
  int iterations = 0;
  bool converged = false;
  Curve curve;
};

struct GeodesicResult {
  double cost = 0.0;
  Curve curve;
  double length = 0.0;
  int iterations = 0;
  std::string winner;
  bool converged = false;
  /// Cost of every initialization before descent, in start order.
  std::vector<double> initial_costs;
  /// Every candidate when config.verbose is set.
  std::vector<GeodesicCandidate> candidates;
};

struct NamedCurve {
  std::string name;
  Curve curve;
};

/// Local descent from each initialization with periodic redistribution;
/// returns the best candidate. The segment from p to q is always tried
/// first; `extra_inits` are appended.
GeodesicResult minimize_geodesic(const ConformalFactor& factor, const State& p, const State& q,
                                 const GeodesicConfig& config,
                                 const std::vector<NamedCurve>& extra_inits = {});

/// d_W(x, p, q): geodesic distance for F = 2 sqrt(W(x, .)).
GeodesicResult geodesic_distance(PotentialPtr potential, const Point& x, const State& p,
                                 const State& q, const GeodesicConfig& config = {});

/// d_F(p, q) for the region-minimized factor over `region`.
GeodesicResult region_distance(PotentialPtr potential, const Box& region, const State& p,
                               const State& q, const GeodesicConfig& config = {},
                               int samples_per_axis = 9);

/// Scalar (M = 1) closed route: 2 * |integral from p to q of sqrt(W(x, s)) ds|.
double scalar_distance(const MultiWellPotential& potential, const Point& x, double p, double q);

/// sigma = 1/2 min{r, delta, (alpha_min / alpha_max) delta, sqrt(eta / alpha_max)}.
double sigma_bound(double r, double delta, double alpha_min, double alpha_max, double eta);

struct WellGeometry {
  double sigma = 0.0;
  /// Minimum of the region factor outside the sigma/2 neighbourhoods.
  double floor_sigma = 0.0;
  double eta = 0.0;  // empirical
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double lipschitz_sum = 0.0;
  double region_diameter = 0.0;
  int wells = 0;
  Box region;

  /// Distance from z to the well image z_i(region).
  std::function<double(int, const State&)> distance_to_well;
};

struct WellGeometryOptions {
  int eta_density = 1000;
  int samples_per_axis = 9;  // region samples for alpha ranges and F_m
  int floor_samples = 64;    // state-grid points per axis for the floor search
};

/// Geometry constants of the wells over a convex box region. Throws
/// GeometryError when the well images are not separated on the region.
WellGeometry well_geometry(PotentialPtr potential, const Box& region,
                           const WellGeometryOptions& options = {});

struct LengthBound {
  double bound = 0.0;
  double distance = 0.0;  // d_F upper bound used in the bound
  GeodesicResult geodesic;
  WellGeometry geometry;
};

/// k sigma + diam(R) sum_i Lip(z_i) + (d_F(p, q) + 1) / floor_sigma.
LengthBound length_bound(PotentialPtr potential, const Box& region, const State& p,
                         const State& q, const GeodesicConfig& config = {},
                         const WellGeometryOptions& options = {});

/// Uniform length bound for geodesics between points of the ball B(0, radius):
/// k sigma + diam(domain) sum_i Lip(z_i) + (2 radius Wmax + 1) / floor_sigma.
double uniform_length_bound(PotentialPtr potential, const Box& region, double radius,
                            const WellGeometryOptions& options = {});

}  // namespace phasegeo

#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "phasegeo/geodesic.hpp"
#include "phasegeo/potential.hpp"

namespace phasegeo {

/// d_W between arbitrary states; the scalar closed form when M = 1.
double well_distance(PotentialPtr potential, const Point& x, const State& p, const State& q,
                     const GeodesicConfig& config = {});

/// Memoized surface tension x -> d_W(x, z_i(x), z_j(x)). Points are quantized
/// to a 1e-6 lattice and the value is computed at the lattice point, so the
/// result does not depend on query order. Safe for concurrent use.
class TensionCache {
 public:
  explicit TensionCache(PotentialPtr potential, GeodesicConfig config = {});
  double operator()(const Point& x, int i, int j);
  std::size_t size() const;
  std::size_t hits() const;

  static constexpr double kQuantum = 1e-6;

 private:
  using Key = std::tuple<long long, long long, int, int>;
  PotentialPtr potential_;
  GeodesicConfig config_;
  mutable std::mutex mutex_;
  std::map<Key, double> memo_;
  std::size_t hits_ = 0;
};

/// Jump points x_1 < ... < x_m with a well label on each of the m + 1
/// subintervals.
struct JumpConfiguration1D {
  std::vector<double> jumps;
  std::vector<int> labels;
};

struct InterfaceSegment {
  Point a, b;
  int left = 0, right = 1;
};

struct InterfaceMesh2D {
  std::vector<InterfaceSegment> segments;
};

struct F0Result {
  double total = 0.0;
  std::vector<double> parts;  // per jump (1D) or per segment (2D)
};

F0Result F0_energy_1d(PotentialPtr potential, const JumpConfiguration1D& config,
                      TensionCache* cache = nullptr);

/// Gauss-Legendre quadrature with `quadrature_per_segment` nodes along each
/// segment; segments are evaluated on up to `threads` threads.
F0Result F0_energy_2d(PotentialPtr potential, const InterfaceMesh2D& mesh,
                      int quadrature_per_segment = 8, TensionCache* cache = nullptr,
                      int threads = 1);

struct MinimalJump {
  double x = 0.0;
  double energy = 0.0;
};

struct MinimalJumpOptions {
  int scan_points = 200;
  double tolerance = 1e-6;
  GeodesicConfig geodesic;
};

/// Best single jump from label i (left) to label j (right). Without a mass
/// constraint the jump location minimizes d_W(x, z_i(x), z_j(x)); with one it
/// is fixed by the mass of the two-phase configuration.
MinimalJump minimal_jump_1d(PotentialPtr potential, int i, int j,
                            const std::optional<State>& mass = std::nullopt,
                            const MinimalJumpOptions& options = {});

/// Integral of the two-phase configuration with a jump at x.
State two_phase_mass(const MultiWellPotential& potential, int i, int j, double x);

/// 1D: F0 plus d_W(a, Tr u(a), g_left) + d_W(b, Tr u(b), g_right).
double dirichlet_energy_1d(PotentialPtr potential, const JumpConfiguration1D& config,
                           const State& g_left, const State& g_right,
                           const GeodesicConfig& geodesic = {});

/// 2D: F0 of the mesh plus the boundary integral of d_W(x, z_label(x)(x), g(x))
/// over the box boundary, `quadrature_per_side` Gauss nodes on each of 16
/// panels per side.
double dirichlet_energy_2d(PotentialPtr potential, const InterfaceMesh2D& mesh,
                           const std::function<int(const Point&)>& trace_label,
                           const std::function<State(const Point&)>& g,
                           int quadrature_per_segment = 8, int quadrature_per_side = 8,
                           const GeodesicConfig& geodesic = {});

// Non-separated wells: the two-well potential whose second well detaches
// from the first like x_1^2, with the jump curve x_2 = sin(x_1^{-2}).

struct CounterexampleRow {
  double x1 = 0.0;
  double distance = 0.0;  // computed d_W((x1, 0), z_1, z_2)
  double bound = 0.0;     // x1^6
  bool within = false;    // distance <= bound (1 + 1e-3)
};

std::vector<CounterexampleRow> counterexample_table(PotentialPtr potential,
                                                    const std::vector<double>& x1_values,
                                                    const GeodesicConfig& geodesic = {});

struct RefinementLevel {
  double cutoff = 0.0;    // the jump curve is taken over x_1 in [cutoff, 1]
  double weighted = 0.0;  // integral of d_W along the curve
  double plain = 0.0;     // integral of |z_1 - z_2| along the curve
};

/// d_W is tabulated once on `table_points` values of x_1 (it does not depend
/// on x_2) and interpolated along the curve.
std::vector<RefinementLevel> counterexample_refinement(PotentialPtr potential,
                                                       const std::vector<double>& cutoffs,
                                                       int table_points = 48,
                                                       const GeodesicConfig& geodesic = {});

}  // namespace phasegeo

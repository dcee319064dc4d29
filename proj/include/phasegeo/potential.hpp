#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasegeo/box.hpp"
#include "phasegeo/types.hpp"

namespace phasegeo {

/// Lipschitz map x -> z_i(x) giving the position of one well.
class WellMap {
 public:
  enum class Kind { constant, affine, parabola };

  static WellMap constant(State value);
  /// z(x) = offset + slope * x, slope of shape M x N.
  static WellMap affine(State offset, Eigen::MatrixXd slope);
  /// z(x) = (x_1, c * max(x_1, 0)^2); the moving well of the non-separated
  /// counterexample.
  static WellMap parabola(double curvature = 1.0);

  State operator()(const Point& x) const;
  /// Lipschitz constant on the given domain (exact for every kind).
  double lipschitz(const Box& domain) const;
  int state_dim() const;
  Kind kind() const { return kind_; }
  bool is_constant() const;

  nlohmann::json to_json() const;
  static WellMap from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::constant;
  State offset_;
  Eigen::MatrixXd slope_;
  double curvature_ = 0.0;
};

/// Structural constants declared by a potential. Entries the potential does
/// not know are NaN; validation reports empirical values instead.
struct PotentialConstants {
  std::vector<double> alpha;  // quadratic coefficients at the domain center
  double r = 0.0;             // radius of the quadratic region
  double delta = 0.0;         // well separation
  double S = 0.0;             // linear growth slope
  double R = 0.0;             // linear growth radius
  double eta = std::numeric_limits<double>::quiet_NaN();  // floor away from wells
};

/// Spatially dependent multi-well potential W(x, p) >= 0 on a box domain.
/// Immutable after construction; safe to evaluate concurrently.
class MultiWellPotential {
 public:
  virtual ~MultiWellPotential() = default;

  const std::string& name() const { return name_; }
  const Box& domain() const { return domain_; }
  int space_dim() const { return domain_.dim(); }
  int state_dim() const { return state_dim_; }
  int num_wells() const { return static_cast<int>(wells_.size()); }
  const WellMap& well_map(int i) const { return wells_.at(i); }
  State well(int i, const Point& x) const { return wells_.at(i)(x); }
  const PotentialConstants& constants() const { return constants_; }
  /// W equals alpha_i |p - z_i(x)|^2 exactly inside radius r of every well.
  bool exact_h3() const { return exact_h3_; }
  bool separated_wells() const { return separated_; }

  /// W(x, p). Throws DomainError when x is outside the closed domain.
  double evaluate(const Point& x, const State& p) const;
  /// Gradient of W with respect to p.
  State grad_p(const Point& x, const State& p) const;
  /// Quadratic coefficient alpha_i(x) of well i.
  virtual double alpha(int i, const Point& x) const = 0;

  /// Unchecked evaluation for hot loops whose x is known to be in the domain.
  virtual double value(const Point& x, const State& p) const = 0;
  virtual State gradient(const Point& x, const State& p) const = 0;

  nlohmann::json descriptor() const;

 protected:
  MultiWellPotential(std::string name, Box domain, std::vector<WellMap> wells);
  /// Kind-specific parameters for the descriptor.
  virtual nlohmann::json params() const = 0;
  /// Fills delta from sampled separation and validates a declared value.
  void settle_separation(std::optional<double> declared_delta);

  std::string name_;
  Box domain_;
  std::vector<WellMap> wells_;
  int state_dim_ = 1;
  PotentialConstants constants_;
  bool exact_h3_ = false;
  bool separated_ = false;
};

using PotentialPtr = std::shared_ptr<const MultiWellPotential>;

/// Names accepted by make_builtin, in stable order.
const std::vector<std::string>& builtin_names();

/// Builds a named potential. `options` has the descriptor layout
/// {domain:{lo,hi}, wells:[...], constants:{alpha,r,delta,S,R,eta}, params:{...}};
/// every field is optional and defaults per builtin.
PotentialPtr make_builtin(const std::string& name, const nlohmann::json& options = {});

/// Inverse of MultiWellPotential::descriptor().
PotentialPtr potential_from_json(const nlohmann::json& descriptor);

struct AssumptionCheck {
  std::string name;  // H1, H2, H3, H4, Hold4
  bool pass = false;
  double margin = 0.0;  // >= 0 on pass; worst sampled slack
  Point witness_x;
  State witness_p;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  /// Sampled infimum of W outside the r/2 balls around the wells.
  double empirical_eta = 0.0;
  bool all_pass() const;
  const AssumptionCheck& get(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Samples the structural assumptions at roughly `sample_density` points per
/// check. Never throws on a failed assumption.
AssumptionReport validate_assumptions(const MultiWellPotential& potential, int sample_density);

/// Sampled infimum of W over x in `region` and p outside the balls of
/// radius r/2 around every well.
double empirical_eta(const MultiWellPotential& potential, const Box& region, int sample_density);

struct MaxwellParameters {
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
};

struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Common tangent (alpha, beta) of a non-convex W0 on [lo, hi] with slope mu.
/// Throws NoBitangentError when W0 is convex on the bracket or the tangency
/// system cannot be solved.
MaxwellParameters maxwell_parameters(const ScalarFunction& w0, double lo, double hi);

}  // namespace phasegeo

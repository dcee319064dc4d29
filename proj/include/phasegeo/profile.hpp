#pragma once

#include <vector>

#include "phasegeo/geodesic.hpp"
#include "phasegeo/interpolation.hpp"
#include "phasegeo/potential.hpp"

namespace phasegeo {

/// One-dimensional transition layer t -> gamma(g(t)), t in [0, tau], obtained
/// by reparametrizing a curve so that the equipartition ODE
///   g'(t)^2 = (lambda + W(x, gamma(g))) / (eps^2 |gamma'(g)|^2)
/// holds. gamma is the Catmull-Rom interpolant of the source polyline.
class TransitionProfile {
 public:
  double epsilon() const { return epsilon_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  const Point& x() const { return x_; }
  const PotentialPtr& potential() const { return potential_; }
  const CatmullRom& curve() const { return curve_; }
  /// Euclidean length of the interpolated curve.
  double curve_length() const { return length_; }

  /// g(t); clamped to -1 for t <= 0 and to 1 for t >= tau (the padding).
  double g(double t) const;
  double g_prime(double t) const;
  /// u(t) = gamma(g(t)).
  State u(double t) const;
  /// W(x, u) / eps + eps |gamma'(g)|^2 g'^2.
  double integrand(double t) const;

  /// Dense grid in t and the matching parameter values s = g(t).
  const std::vector<double>& t_knots() const { return g_.knots(); }
  const std::vector<double>& s_knots() const { return g_.values(); }

 private:
  friend TransitionProfile build_profile(PotentialPtr, const Point&, const Curve&, double, double,
                                         int);
  PotentialPtr potential_;
  Point x_;
  double epsilon_ = 0.0;
  double lambda_ = 0.0;
  double tau_ = 0.0;
  double length_ = 0.0;
  CatmullRom curve_;
  MonotoneCubic g_;
};

/// Builds the profile from the primitive
///   Psi(s) = integral_{-1}^{s} eps |gamma'| / sqrt(lambda + W(x, gamma)),
/// tau = Psi(1), g = Psi^{-1}. `quadrature_nodes` is the number of dense
/// subintervals (8-point Gauss-Legendre on each).
TransitionProfile build_profile(PotentialPtr potential, const Point& x, const Curve& gamma,
                                double epsilon, double lambda, int quadrature_nodes = 1000);

/// Integral over [0, tau] of the profile integrand.
double profile_energy(const TransitionProfile& profile);

/// Integral over s in [-1, 1] of 2 sqrt(W(x, gamma) + lambda) |gamma'| on the
/// interpolated curve.
double reparametrized_cost(const TransitionProfile& profile);

/// Integral over s in [-1, 1] of 2 sqrt(W(x, gamma)) |gamma'| on the
/// interpolated curve.
double interpolant_cost(const TransitionProfile& profile);

/// Largest relative ODE residual |g'^2 - rhs| / rhs over `points` interior
/// points of (0, tau).
double ode_residual(const TransitionProfile& profile, int points = 400);

/// lambda = eps^(3/4).
double default_lambda(double epsilon);

}  // namespace phasegeo

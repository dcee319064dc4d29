#include "phasegeo/profile.hpp"

#include <algorithm>
#include <cmath>

#include "phasegeo/errors.hpp"
#include "phasegeo/quadrature.hpp"

namespace phasegeo {

namespace {

const GaussLegendre& rule() {
  static const GaussLegendre r(8);
  return r;
}

// Integral of f over [a, b] on the given breakpoints.
template <typename F>
double integrate_on(const std::vector<double>& breaks, F&& f) {
  const auto& q = rule();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < q.size(); ++j) total += q.weights[j] * half * f(mid + half * q.nodes[j]);
  }
  return total;
}

// Dense breakpoints in s: every spline segment cut into equal pieces.
std::vector<double> dense_breaks(const CatmullRom& c, int target) {
  const int segs = c.segments();
  const int sub = std::max(1, (target + segs - 1) / segs);
  std::vector<double> out;
  out.reserve(segs * sub + 1);
  for (int j = 0; j < segs; ++j) {
    const double a = c.knot(j), b = c.knot(j + 1);
    for (int k = 0; k < sub; ++k) out.push_back(a + (b - a) * k / sub);
  }
  out.push_back(c.knot(segs));
  return out;
}

}  // namespace

double default_lambda(double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("default_lambda: epsilon must be positive");
  return std::pow(epsilon, 0.75);
}

TransitionProfile build_profile(PotentialPtr potential, const Point& x, const Curve& gamma,
                                double epsilon, double lambda, int quadrature_nodes) {
  if (!(lambda > 0.0)) throw ParameterError("profile: lambda must be positive");
  if (!(epsilon > 0.0)) throw ParameterError("profile: epsilon must be positive");
  if (quadrature_nodes < 1) throw ParameterError("profile: need at least one quadrature interval");
  if (!potential->domain().contains(x)) throw DomainError("profile: x outside domain");
  if (gamma.nodes.size() < 2) throw ParameterError("profile: curve needs two nodes");

  TransitionProfile p;
  p.potential_ = potential;
  p.x_ = x;
  p.epsilon_ = epsilon;
  p.lambda_ = lambda;
  p.curve_ = CatmullRom(gamma.nodes);
  if (p.curve_.segments() < 1) throw ParameterError("profile: curve has zero length");

  const auto& c = p.curve_;
  auto density = [&](double s) {
    const double w = potential->value(x, c.value(s));
    return epsilon * c.derivative(s).norm() / std::sqrt(lambda + w);
  };

  const auto s = dense_breaks(c, quadrature_nodes);
  std::vector<double> t(s.size(), 0.0), slope(s.size(), 0.0);
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    t[k + 1] = t[k] + integrate_on({s[k], s[k + 1]}, density);
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = density(s[k]);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericError("profile: vanishing curve speed at s = " + std::to_string(s[k]));
    }
    slope[k] = 1.0 / d;
    if (k > 0 && !(t[k] > t[k - 1])) throw NumericError("profile: primitive is not increasing");
  }
  p.length_ = integrate_on(s, [&](double u) { return c.derivative(u).norm(); });
  p.tau_ = t.back();
  p.g_ = MonotoneCubic(std::move(t), s, std::move(slope));
  return p;
}

double TransitionProfile::g(double t) const {
  if (t <= 0.0) return -1.0;
  if (t >= tau_) return 1.0;
  return std::clamp(g_(t), -1.0, 1.0);
}

double TransitionProfile::g_prime(double t) const {
  if (t <= 0.0 || t >= tau_) return 0.0;
  return g_.derivative(t);
}

State TransitionProfile::u(double t) const { return curve_.value(g(t)); }

double TransitionProfile::integrand(double t) const {
  const double s = g(t);
  const double gp = g_prime(t);
  return potential_->value(x_, curve_.value(s)) / epsilon_ +
         epsilon_ * curve_.derivative(s).squaredNorm() * gp * gp;
}

double profile_energy(const TransitionProfile& p) {
  return integrate_on(p.t_knots(), [&](double t) { return p.integrand(t); });
}

double reparametrized_cost(const TransitionProfile& p) {
  const auto& c = p.curve();
  return integrate_on(p.s_knots(), [&](double s) {
    const double w = p.potential()->value(p.x(), c.value(s));
    return 2.0 * std::sqrt(w + p.lambda()) * c.derivative(s).norm();
  });
}

double interpolant_cost(const TransitionProfile& p) {
  const auto& c = p.curve();
  return integrate_on(p.s_knots(), [&](double s) {
    const double w = p.potential()->value(p.x(), c.value(s));
    return 2.0 * std::sqrt(w) * c.derivative(s).norm();
  });
}

double ode_residual(const TransitionProfile& p, int points) {
  double worst = 0.0;
  for (int k = 1; k <= points; ++k) {
    const double t = p.tau() * k / (points + 1);
    const double s = p.g(t);
    const double gp = p.g_prime(t);
    const double speed = p.curve().derivative(s).squaredNorm();
    const double rhs = (p.lambda() + p.potential()->value(p.x(), p.curve().value(s))) /
                       (p.epsilon() * p.epsilon() * speed);
    worst = std::max(worst, std::abs(gp * gp - rhs) / rhs);
  }
  return worst;
}

}  // namespace phasegeo

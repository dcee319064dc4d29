#pragma once

#include <functional>
#include <vector>

namespace phasegeo {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);
  int size() const { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a, b] with this rule.
  double integrate(const std::function<double(double)>& f, double a, double b) const;
  /// Composite rule over `panels` equal panels of [a, b].
  double integrate_composite(const std::function<double(double)>& f, double a, double b,
                             int panels) const;
};

/// Minimizes a unimodal f on [a, b] by golden-section search; returns the
/// abscissa once the bracket is shorter than tol.
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol);

/// Root of f on [a, b] by bisection; f(a) and f(b) must have opposite signs
/// (or one of them is zero).
double bisect(const std::function<double(double)>& f, double a, double b, double tol,
              int max_iterations = 200);

}  // namespace phasegeo

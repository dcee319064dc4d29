#pragma once

#include <vector>

#include "phasegeo/types.hpp"

namespace phasegeo {

/// Piecewise cubic Hermite interpolant of strictly increasing data, with
/// slopes limited by the Fritsch-Carlson conditions so the interpolant is
/// strictly increasing as well.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// Slopes estimated from the data (three-point formula, then limited).
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  /// Caller-supplied slopes (e.g. exact derivatives), limited if needed.
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

  double operator()(double t) const;
  double derivative(double t) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return m_; }

 private:
  void limit();
  int interval(double t) const;

  std::vector<double> x_, y_, m_;
};

/// C^1 Catmull-Rom spline through polyline nodes with chordal knot spacing,
/// reparametrized over s in [-1, 1]. Zero-length segments are dropped.
class CatmullRom {
 public:
  CatmullRom() = default;
  explicit CatmullRom(const std::vector<State>& nodes);

  State value(double s) const;
  State derivative(double s) const;
  int segments() const { return static_cast<int>(nodes_.size()) - 1; }
  /// Parameter value s_j of node j.
  double knot(int j) const { return s_[j]; }
  const std::vector<State>& nodes() const { return nodes_; }

 private:
  int segment_of(double s) const;

  std::vector<State> nodes_;
  std::vector<State> tangents_;  // d gamma / ds at nodes
  std::vector<double> s_;
};

}  // namespace phasegeo

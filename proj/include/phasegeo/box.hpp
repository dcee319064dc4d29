#pragma once

#include <vector>

#include "phasegeo/types.hpp"

namespace phasegeo {

/// Closed axis-aligned box [lo, hi] in R^N, N in {1, 2}. A box with lo == hi
/// along every axis is a single point.
struct Box {
  Point lo;
  Point hi;

  Box() = default;
  Box(Point lo_, Point hi_);

  static Box point(const Point& x) { return Box(x, x); }
  static Box interval(double a, double b);
  static Box rectangle(double x0, double x1, double y0, double y1);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& x, double tol = 1e-12) const;
  double diameter() const { return (hi - lo).norm(); }
  double volume() const;
  Point center() const { return 0.5 * (lo + hi); }
  bool is_point() const { return diameter() == 0.0; }
  /// Signed distance from x to the boundary; positive inside.
  double distance_to_boundary(const Point& x) const;
  /// Tensor grid with `per_axis` points per non-degenerate axis (a single
  /// point along degenerate axes).
  std::vector<Point> sample_grid(int per_axis) const;
};

}  // namespace phasegeo

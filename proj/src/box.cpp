#include "phasegeo/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasegeo/errors.hpp"

namespace phasegeo {

Box::Box(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() < 1 || lo.size() > kMaxSpaceDim) {
    throw ParameterError("box: corners must have equal dimension 1 or 2");
  }
  for (Eigen::Index a = 0; a < lo.size(); ++a) {
    if (!(lo(a) <= hi(a))) throw ParameterError("box: lo must not exceed hi");
  }
}

Box Box::interval(double a, double b) { return Box(make_point({a}), make_point({b})); }

Box Box::rectangle(double x0, double x1, double y0, double y1) {
  return Box(make_point({x0, y0}), make_point({x1, y1}));
}

bool Box::contains(const Point& x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index a = 0; a < lo.size(); ++a) {
    if (!(x(a) >= lo(a) - tol && x(a) <= hi(a) + tol)) return false;
  }
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (Eigen::Index a = 0; a < lo.size(); ++a) v *= hi(a) - lo(a);
  return v;
}

double Box::distance_to_boundary(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < lo.size(); ++a) {
    d = std::min({d, x(a) - lo(a), hi(a) - x(a)});
  }
  return d;
}

std::vector<Point> Box::sample_grid(int per_axis) const {
  per_axis = std::max(per_axis, 1);
  const int n = dim();
  std::vector<int> counts(n);
  for (int a = 0; a < n; ++a) counts[a] = (hi(a) > lo(a) && per_axis > 1) ? per_axis : 1;
  std::vector<Point> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Point x(n);
    for (int a = 0; a < n; ++a) {
      x(a) = counts[a] == 1 ? 0.5 * (lo(a) + hi(a))
                            : lo(a) + (hi(a) - lo(a)) * idx[a] / double(counts[a] - 1);
    }
    out.push_back(x);
    int a = 0;
    while (a < n && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == n) break;
  }
  return out;
}

}  // namespace phasegeo

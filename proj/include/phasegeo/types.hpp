#pragma once

#include <Eigen/Dense>

namespace phasegeo {

/// Largest supported dimension of the state space R^M.
inline constexpr int kMaxStateDim = 4;
/// Largest supported dimension of the physical domain.
inline constexpr int kMaxSpaceDim = 2;

/// A point in state space R^M (well values, field values, curve nodes).
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxStateDim, 1>;
/// A point of the physical domain.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxSpaceDim, 1>;

inline State make_state(std::initializer_list<double> v) {
  State s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) s(i++) = c;
  return s;
}

inline Point make_point(std::initializer_list<double> v) {
  Point s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) s(i++) = c;
  return s;
}

}  // namespace phasegeo

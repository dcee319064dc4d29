#include "phasegeo/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "phasegeo/errors.hpp"

namespace phasegeo {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ParameterError("monotone cubic: need >= 2 matching points");
  m_.assign(n, 0.0);
  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) secant[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
  m_[0] = secant.front();
  m_[n - 1] = secant.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = x_[k] - x_[k - 1], h1 = x_[k + 1] - x_[k];
    m_[k] = (h1 * secant[k - 1] + h0 * secant[k]) / (h0 + h1);
  }
  limit();
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
  if (x_.size() < 2 || y_.size() != x_.size() || m_.size() != x_.size()) {
    throw ParameterError("monotone cubic: need >= 2 matching points and slopes");
  }
  limit();
}

void MonotoneCubic::limit() {
  for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
    if (!(x_[k + 1] > x_[k]) || !(y_[k + 1] > y_[k])) {
      throw NumericError("monotone cubic: data must be strictly increasing");
    }
  }
  for (auto& m : m_) m = std::max(m, 0.0);
  for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
    const double delta = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    const double a = m_[k] / delta, b = m_[k + 1] / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double t = 3.0 / std::sqrt(r2);
      m_[k] = t * a * delta;
      m_[k + 1] = t * b * delta;
    }
  }
}

int MonotoneCubic::interval(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  int k = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(x_.size()) - 2);
}

double MonotoneCubic::operator()(double t) const {
  if (t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  const int k = interval(t);
  const double h = x_[k + 1] - x_[k];
  const double u = (t - x_[k]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[k] + (u3 - 2 * u2 + u) * h * m_[k] +
         (-2 * u3 + 3 * u2) * y_[k + 1] + (u3 - u2) * h * m_[k + 1];
}

double MonotoneCubic::derivative(double t) const {
  t = std::clamp(t, x_.front(), x_.back());
  const int k = interval(t);
  const double h = x_[k + 1] - x_[k];
  const double u = (t - x_[k]) / h;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y_[k] + (-6 * u2 + 6 * u) * y_[k + 1]) / h +
         (3 * u2 - 4 * u + 1) * m_[k] + (3 * u2 - 2 * u) * m_[k + 1];
}

CatmullRom::CatmullRom(const std::vector<State>& nodes) {
  if (nodes.empty()) throw ParameterError("catmull-rom: empty curve");
  nodes_.push_back(nodes.front());
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    if ((nodes[j] - nodes_.back()).norm() > 1e-14 * (1.0 + nodes[j].norm())) {
      nodes_.push_back(nodes[j]);
    }
  }
  if (nodes_.size() < 2) throw ParameterError("catmull-rom: curve has zero length");
  // force the last node to be the exact endpoint
  nodes_.back() = nodes.back();

  const std::size_t n = nodes_.size();
  std::vector<double> chord(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) chord[j] = chord[j - 1] + (nodes_[j] - nodes_[j - 1]).norm();
  s_.resize(n);
  for (std::size_t j = 0; j < n; ++j) s_[j] = -1.0 + 2.0 * chord[j] / chord.back();
  s_.front() = -1.0;
  s_.back() = 1.0;

  tangents_.resize(n);
  tangents_[0] = (nodes_[1] - nodes_[0]) / (s_[1] - s_[0]);
  tangents_[n - 1] = (nodes_[n - 1] - nodes_[n - 2]) / (s_[n - 1] - s_[n - 2]);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    tangents_[j] = (nodes_[j + 1] - nodes_[j - 1]) / (s_[j + 1] - s_[j - 1]);
  }
}

int CatmullRom::segment_of(double s) const {
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  int k = static_cast<int>(it - s_.begin()) - 1;
  return std::clamp(k, 0, segments() - 1);
}

State CatmullRom::value(double s) const {
  s = std::clamp(s, -1.0, 1.0);
  const int k = segment_of(s);
  const double h = s_[k + 1] - s_[k];
  const double u = (s - s_[k]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * nodes_[k] + (u3 - 2 * u2 + u) * h * tangents_[k] +
         (-2 * u3 + 3 * u2) * nodes_[k + 1] + (u3 - u2) * h * tangents_[k + 1];
}

State CatmullRom::derivative(double s) const {
  s = std::clamp(s, -1.0, 1.0);
  const int k = segment_of(s);
  const double h = s_[k + 1] - s_[k];
  const double u = (s - s_[k]) / h;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * nodes_[k] + (-6 * u2 + 6 * u) * nodes_[k + 1]) / h +
         (3 * u2 - 4 * u + 1) * tangents_[k] + (3 * u2 - 2 * u) * tangents_[k + 1];
}

}  // namespace phasegeo

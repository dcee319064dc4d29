#include <algorithm>
#include <cmath>
#include <limits>

#include "phasegeo/errors.hpp"
#include "phasegeo/geodesic.hpp"

namespace phasegeo {

double sigma_bound(double r, double delta, double alpha_min, double alpha_max, double eta) {
  if (!(alpha_max > 0.0) || !(alpha_min > 0.0)) throw ParameterError("sigma: alpha must be positive");
  if (!(r > 0.0) || !(delta > 0.0) || !(eta > 0.0)) {
    throw ParameterError("sigma: r, delta and eta must be positive");
  }
  return 0.5 * std::min({r, delta, alpha_min / alpha_max * delta, std::sqrt(eta / alpha_max)});
}

namespace {

// Unit directions used to probe shells around the wells.
std::vector<State> shell_directions(int m) {
  std::vector<State> dirs;
  if (m == 1) {
    dirs.push_back(make_state({-1.0}));
    dirs.push_back(make_state({1.0}));
  } else if (m == 2) {
    for (int k = 0; k < 48; ++k) {
      const double a = 2.0 * M_PI * k / 48;
      dirs.push_back(make_state({std::cos(a), std::sin(a)}));
    }
  } else {
    int count = 1;
    for (int c = 0; c < m; ++c) count *= 3;
    for (int code = 0; code < count; ++code) {
      State d(m);
      int rest = code;
      for (int c = 0; c < m; ++c) {
        d(c) = rest % 3 - 1.0;
        rest /= 3;
      }
      if (d.norm() > 0.0) dirs.push_back(d.normalized());
    }
  }
  return dirs;
}

// Samples of the state grid covering the wells' bounding box with a margin.
std::vector<State> state_grid(const std::vector<State>& well_points, double margin, int per_axis) {
  const int m = static_cast<int>(well_points.front().size());
  State lo = well_points.front(), hi = well_points.front();
  for (const auto& z : well_points) {
    lo = lo.cwiseMin(z);
    hi = hi.cwiseMax(z);
  }
  lo.array() -= margin;
  hi.array() += margin;
  std::vector<State> out;
  long count = 1;
  for (int c = 0; c < m; ++c) count *= per_axis;
  out.reserve(count);
  for (long code = 0; code < count; ++code) {
    State z(m);
    long rest = code;
    for (int c = 0; c < m; ++c) {
      const int k = static_cast<int>(rest % per_axis);
      rest /= per_axis;
      z(c) = lo(c) + (hi(c) - lo(c)) * k / (per_axis - 1);
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace

WellGeometry well_geometry(PotentialPtr potential, const Box& region,
                           const WellGeometryOptions& options) {
  const Box& dom = potential->domain();
  if (!dom.contains(region.lo) || !dom.contains(region.hi)) {
    throw DomainError("well_geometry: region outside domain");
  }
  const auto& k = potential->constants();
  const int nw = potential->num_wells();
  const int m = potential->state_dim();
  if (nw < 2) throw GeometryError("well_geometry: needs at least two wells");
  if (!(k.r > 0.0) || !(k.delta > 0.0)) {
    throw GeometryError("well_geometry: potential declares no quadratic radius or separation");
  }

  WellGeometry g;
  g.wells = nw;
  g.region = region;
  g.region_diameter = region.diameter();
  const auto xs = region.sample_grid(options.samples_per_axis);

  // Well images on the region, checked for separation at distance delta.
  std::vector<std::vector<State>> images(nw);
  for (int i = 0; i < nw; ++i) {
    for (const auto& x : xs) images[i].push_back(potential->well(i, x));
  }
  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nw; ++i) {
    for (int j = i + 1; j < nw; ++j) {
      for (const auto& a : images[i]) {
        for (const auto& b : images[j]) min_sep = std::min(min_sep, (a - b).norm());
      }
    }
  }
  if (!(min_sep > 0.0) || min_sep < k.delta * (1.0 - 1e-9)) {
    throw GeometryError("well_geometry: well images closer than delta on the region (" +
                        std::to_string(min_sep) + " < " + std::to_string(k.delta) + ")");
  }

  g.alpha_min = std::numeric_limits<double>::infinity();
  g.alpha_max = 0.0;
  for (int i = 0; i < nw; ++i) {
    for (const auto& x : xs) {
      const double a = potential->alpha(i, x);
      g.alpha_min = std::min(g.alpha_min, a);
      g.alpha_max = std::max(g.alpha_max, a);
    }
    g.lipschitz_sum += potential->well_map(i).lipschitz(dom);
  }
  g.eta = empirical_eta(*potential, region, options.eta_density);
  if (!std::isnan(k.eta)) g.eta = std::min(g.eta, k.eta);
  g.sigma = sigma_bound(k.r, k.delta, g.alpha_min, g.alpha_max, g.eta);

  auto pot = potential;
  g.distance_to_well = [pot, region](int i, const State& z) {
    return project_to_well(*pot, region, i, z).distance;
  };

  // Floor of the region factor outside the sigma/2 neighbourhoods. The
  // sampled distance to a well image overestimates the true one, so points
  // slightly inside a neighbourhood may be admitted; that only lowers the
  // floor and keeps the resulting bounds valid.
  const double half = 0.5 * g.sigma;
  auto outside = [&](const State& z) {
    for (int i = 0; i < nw; ++i) {
      for (const auto& w : images[i]) {
        if ((z - w).norm() < half) return false;
      }
    }
    return true;
  };
  auto factor = [&](const State& z) {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& x : xs) w = std::min(w, potential->value(x, z));
    return 2.0 * std::sqrt(w);
  };
  double floor = std::numeric_limits<double>::infinity();
  const auto dirs = shell_directions(m);
  for (int i = 0; i < nw; ++i) {
    for (const auto& w : images[i]) {
      for (double rad : {half * (1.0 + 1e-9), 0.75 * g.sigma, g.sigma, 1.5 * g.sigma,
                         2.0 * g.sigma, 4.0 * g.sigma}) {
        for (const auto& d : dirs) {
          const State z = w + rad * d;
          if (outside(z)) floor = std::min(floor, factor(z));
        }
      }
    }
  }
  std::vector<State> all_images;
  for (const auto& im : images) all_images.insert(all_images.end(), im.begin(), im.end());
  const int per_axis = m == 1 ? 8 * options.floor_samples : m == 2 ? options.floor_samples : 16;
  for (const auto& z : state_grid(all_images, std::max(2.0 * k.r, 0.5), per_axis)) {
    if (outside(z)) floor = std::min(floor, factor(z));
  }
  g.floor_sigma = floor;
  return g;
}

LengthBound length_bound(PotentialPtr potential, const Box& region, const State& p,
                         const State& q, const GeodesicConfig& config,
                         const WellGeometryOptions& options) {
  LengthBound out;
  out.geometry = well_geometry(potential, region, options);
  if (!(out.geometry.floor_sigma > 0.0)) {
    throw GeometryError("length_bound: degenerate floor (Sigma_sigma = 0)");
  }
  out.geodesic = region_distance(potential, region, p, q, config, options.samples_per_axis);
  out.distance = out.geodesic.cost;
  const auto& g = out.geometry;
  out.bound = g.wells * g.sigma + g.region_diameter * g.lipschitz_sum +
              (out.distance + 1.0) / g.floor_sigma;
  return out;
}

double uniform_length_bound(PotentialPtr potential, const Box& region, double radius,
                            const WellGeometryOptions& options) {
  if (!(radius > 0.0)) throw ParameterError("uniform_length_bound: radius must be positive");
  const WellGeometry g = well_geometry(potential, region, options);
  if (!(g.floor_sigma > 0.0)) throw GeometryError("uniform_length_bound: degenerate floor");
  // largest factor value over the domain and the ball B(0, radius)
  const int m = potential->state_dim();
  const auto dirs = shell_directions(m);
  double wmax = 0.0;
  for (const auto& x : potential->domain().sample_grid(options.samples_per_axis)) {
    wmax = std::max(wmax, 2.0 * std::sqrt(potential->value(x, State::Zero(m))));
    for (double f : {0.25, 0.5, 0.75, 1.0}) {
      for (const auto& d : dirs) {
        wmax = std::max(wmax, 2.0 * std::sqrt(potential->value(x, State(f * radius * d))));
      }
    }
  }
  return g.wells * g.sigma + potential->domain().diameter() * g.lipschitz_sum +
         (2.0 * radius * wmax + 1.0) / g.floor_sigma;
}

}  // namespace phasegeo

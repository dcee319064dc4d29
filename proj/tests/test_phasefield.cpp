#include <doctest.h>

#include <cmath>
#include <random>

#include "phasegeo/errors.hpp"
#include "phasegeo/phasefield.hpp"

using namespace phasegeo;
using nlohmann::json;

namespace {

PotentialPtr unit_interval_well() {
  return make_builtin("scalar-double-well", {{"domain", {{"lo", {0.0}}, {"hi", {1.0}}}}});
}

PotentialPtr planar_wells() {
  return make_builtin("blended-quadratic",
                      {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}});
}

// Wells in R^2 moving along a 1D domain.
PotentialPtr moving_wells_1d() {
  json wells = json::array();
  wells.push_back({{"type", "affine"}, {"offset", {-1.0, 0.0}}, {"slope", {{0.2}, {0.1}}}});
  wells.push_back({{"type", "affine"}, {"offset", {1.0, 0.0}}, {"slope", {{0.0}, {-0.2}}}});
  return make_builtin("blended-quadratic", {{"wells", wells}});
}

Field tanh_field(const Grid& grid, double eps) {
  return Field::sample(grid, [eps](const Point& x) { return make_state({std::tanh(x(0) / eps)}); });
}

double directional_error(const MultiWellPotential& w, const Field& f, double eps,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd v(f.values.rows(), f.values.cols());
  for (int k = 0; k < v.size(); ++k) v(k) = n01(rng);
  if (f.boundary == BoundaryKind::dirichlet) {
    for (int k = 0; k < f.grid.size(); ++k) {
      if (f.grid.on_boundary(k)) v.col(k).setZero();
    }
  }
  if (f.mass) {
    // directions that keep the mass
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(v.rows());
    for (int k = 0; k < f.grid.size(); ++k) mean += f.grid.weights()[k] * v.col(k);
    mean /= f.grid.box().volume();
    for (int k = 0; k < f.grid.size(); ++k) v.col(k) -= mean;
  }
  const double t = 1e-6;
  Field a = f, b = f;
  a.values += t * v;
  b.values -= t * v;
  const double fd = (energy(w, a, eps) - energy(w, b, eps)) / (2.0 * t);
  const double an = grid_inner(f.grid, energy_gradient(w, f, eps), v);
  return std::abs(fd - an) / std::max(std::abs(an), 1e-8);
}

}  // namespace

TEST_CASE("grid layout") {
  const Grid g(Box::rectangle(0, 2, 0, 1), 5, 3);
  CHECK(g.size() == 15);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.hy() == doctest::Approx(0.5));
  CHECK(g.point(g.index(4, 2))(0) == doctest::Approx(2.0));
  CHECK(g.on_boundary(g.index(0, 1)));
  CHECK_FALSE(g.on_boundary(g.index(2, 1)));
  double total = 0.0;
  for (double w : g.weights()) total += w;
  CHECK(total == doctest::Approx(2.0));
  CHECK(Grid::with_spacing(Box::interval(-1, 1), 0.3).h() <= 0.3);
  CHECK_THROWS_AS(Grid(Box::interval(0, 1), 1), ParameterError);
}

TEST_CASE("energy examples") {
  SUBCASE("zero field on the unit interval") {
    const auto w = unit_interval_well();
    const Field u = Field::sample(Grid(w->domain(), 11), [](const Point&) {
      return make_state({0.0});
    });
    CHECK(energy(*w, u, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("constant well") {
    const auto w = planar_wells();
    const Field u = Field::sample(Grid(w->domain(), 9, 9),
                                  [](const Point&) { return make_state({1.0, 0.0}); });
    CHECK(energy(*w, u, 0.1) == 0.0);
    CHECK(energy_gradient(*w, u, 0.1).norm() == 0.0);
    CHECK_THROWS_AS(energy(*w, u, 0.0), ParameterError);
  }
  SUBCASE("self-convergence of a tanh layer") {
    const auto w = make_builtin("scalar-double-well");
    const double eps = 0.05;
    const double coarse = energy(*w, tanh_field(Grid::with_spacing(w->domain(), eps / 5), eps), eps);
    const double fine = energy(*w, tanh_field(Grid::with_spacing(w->domain(), eps / 10), eps), eps);
    CHECK(std::abs(coarse - fine) <= 0.01 * fine);
    CHECK(fine == doctest::Approx(8.0 / 3.0).epsilon(0.01));
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  SUBCASE("1D scalar, every boundary spec") {
    const auto w = make_builtin("modulated");
    const Grid g(w->domain(), 41);
    Field f = Field::sample(g, [&](const Point&) { return make_state({u(rng)}); });
    CHECK(directional_error(*w, f, 0.1, rng) <= 1e-5);
    Field d = f;
    d.set_dirichlet([](const Point& x) { return make_state({x(0)}); });
    CHECK(directional_error(*w, d, 0.1, rng) <= 1e-5);
    const auto gd = energy_gradient(*w, d, 0.1);
    CHECK(gd.col(0).norm() == 0.0);
    CHECK(gd.col(g.size() - 1).norm() == 0.0);
    Field m = f;
    m.mass = m.integral();
    CHECK(directional_error(*w, m, 0.1, rng) <= 1e-5);
  }
  SUBCASE("2D vector") {
    const auto w = planar_wells();
    const Grid g(w->domain(), 9, 7);
    Field f = Field::sample(g, [&](const Point&) { return make_state({u(rng), u(rng)}); });
    CHECK(directional_error(*w, f, 0.2, rng) <= 1e-5);
    f.set_dirichlet([](const Point& x) { return make_state({x(0), -x(1)}); });
    CHECK(directional_error(*w, f, 0.2, rng) <= 1e-5);
  }
}

TEST_CASE("gradient flow") {
  SUBCASE("a constant well is a fixed point") {
    const auto w = make_builtin("scalar-double-well");
    const Field init = Field::sample(Grid(w->domain(), 51), [](const Point&) {
      return make_state({-1.0});
    });
    const auto res = minimize(*w, init, 0.1);
    CHECK(res.energy == 0.0);
    CHECK(res.field.values == init.values);
    CHECK(res.converged);
  }
  SUBCASE("mass-constrained layer") {
    const auto w = make_builtin("scalar-double-well");
    const double eps = 0.05;
    const Grid g = Grid::with_spacing(w->domain(), eps / 5);
    Field init = Field::sample(g, [](const Point& x) { return make_state({x(0) < 0.2 ? -1.0 : 1.0}); });
    init.mass = make_state({-0.2});
    init.project_mass();
    const auto res = minimize(*w, init, eps);
    CHECK(res.converged);
    CHECK(res.max_mass_error <= 1e-10);
    CHECK(std::abs(res.field.integral()(0) + 0.2) <= 1e-10);
    for (std::size_t k = 1; k < res.energy_trace.size(); ++k) {
      CHECK(res.energy_trace[k] <= res.energy_trace[k - 1]);
    }
    CHECK(res.energy == doctest::Approx(8.0 / 3.0).epsilon(0.05));
    // the layer sits where the mass puts it: -1 on (-1, 0.1), +1 on (0.1, 1)
    CHECK(std::abs(interface_location_1d(res.field) - 0.1) <= 2.0 * g.h());
    CHECK(std::abs(gibbs_thomson_estimate(*w, res.field, eps)(0)) <= 1e-3);
  }
  SUBCASE("Dirichlet rows stay frozen") {
    const auto w = make_builtin("scalar-double-well");
    const double eps = 0.1;
    Field init = Field::sample(Grid::with_spacing(w->domain(), eps / 5), [](const Point& x) {
      return make_state({x(0) < 0.0 ? -1.0 : 1.0});
    });
    init.set_dirichlet([](const Point& x) { return make_state({x(0) < 0.0 ? -1.0 : 0.5}); });
    const auto res = minimize(*w, init, eps);
    CHECK(res.field.values(0, 0) == -1.0);
    CHECK(res.field.values(0, res.field.grid.size() - 1) == 0.5);
    init.mass = make_state({0.0});
    CHECK_THROWS_AS(minimize(*w, init, eps), ParameterError);
  }
}

TEST_CASE("recovery sequence") {
  SUBCASE("constant wells approach the surface tension") {
    const auto w = make_builtin("scalar-double-well");
    double previous = 1e300;
    for (double eps : {0.02, 0.01, 0.005}) {
      const Grid g = Grid::with_spacing(w->domain(), eps / 10);
      const auto layer = recovery_sequence_1d(w, g, -0.1, 0, 1, eps);
      const double e = energy(*w, layer.field, eps);
      CHECK(e < previous);
      CHECK(e >= 8.0 / 3.0 * (1.0 - 1e-3));
      // only the grid edges shared with the profile contribute
      CHECK(matching_layer_energy(*w, layer, eps) <= 1e-3);
      previous = e;
    }
    CHECK(previous == doctest::Approx(8.0 / 3.0).epsilon(0.03));
  }
  SUBCASE("matching layers vanish for moving wells") {
    const auto w = moving_wells_1d();
    double previous = 1e300;
    for (double eps : {0.04, 0.02, 0.01}) {
      const Grid g = Grid::with_spacing(w->domain(), eps / 10);
      const auto layer = recovery_sequence_1d(w, g, 0.0, 0, 1, eps);
      const double m = matching_layer_energy(*w, layer, eps);
      CHECK(m > 0.0);
      CHECK(m < previous);
      previous = m;
    }
  }
  SUBCASE("a layer that does not fit") {
    const auto w = make_builtin("scalar-double-well");
    CHECK_THROWS_AS(recovery_sequence_1d(w, Grid(w->domain(), 201), 0.9, 0, 1, 0.2),
                    GeometryError);
  }
}

TEST_CASE("epsilon sweep bookkeeping") {
  const auto w = make_builtin("scalar-double-well");
  SweepScenario s;
  s.mass = make_state({0.0});
  const auto rec = epsilon_sweep(w, s, {0.1, 0.05});
  REQUIRE(rec.rows.size() == 2);
  CHECK(rec.rows[0].epsilon > rec.rows[1].epsilon);
  CHECK(rec.rows[1].h <= 0.2 * 0.05 + 1e-15);
  CHECK(rec.rows[1].max_mass_error <= 1e-10);
  CHECK_THROWS_AS(epsilon_sweep(w, s, {0.05, 0.1}), ParameterError);
  s.h_over_eps = 0.5;
  CHECK_THROWS_AS(epsilon_sweep(w, s, {0.1}), ParameterError);
}

TEST_CASE("level set length of a flat and a round interface") {
  const Grid g(Box::rectangle(0, 1, 0, 1), 65, 65);
  std::vector<double> flat(g.size()), disk(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const Point x = g.point(k);
    flat[k] = x(0);
    disk[k] = (x - make_point({0.5, 0.5})).norm() / 0.25 * 0.5;
  }
  CHECK(level_set_length(g, flat) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(level_set_length(g, disk) == doctest::Approx(2.0 * M_PI * 0.25).epsilon(1e-3));
}

TEST_CASE("resampling onto a finer grid") {
  const Grid coarse(Box::interval(0, 1), 11), fine(Box::interval(0, 1), 101);
  const Field f = Field::sample(coarse, [](const Point& x) { return make_state({3.0 * x(0)}); });
  const Field r = resample(f, fine);
  for (int k = 0; k < fine.size(); ++k) CHECK(r.values(0, k) == doctest::Approx(3.0 * fine.point(k)(0)));
}

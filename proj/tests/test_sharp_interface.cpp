#include <doctest.h>

#include <cmath>
#include <thread>

#include "phasegeo/errors.hpp"
#include "phasegeo/sharp_interface.hpp"

using namespace phasegeo;
using nlohmann::json;

namespace {

constexpr double kSigma = 8.0 / 3.0;

PotentialPtr planar_wells() {
  return make_builtin("blended-quadratic",
                      {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}});
}

PotentialPtr square_double_well() {
  return make_builtin("scalar-double-well", {{"domain", {{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}}}});
}

// Independent value of 2 * integral of |1 - s^2| from a to b (the scalar
// double-well distance between a and b).
double scalar_oracle(double a, double b) {
  auto prim = [](double s) {
    // antiderivative of |1 - s^2|, continuous and increasing
    if (s <= -1.0) return s * s * s / 3.0 - s - 4.0 / 3.0;
    if (s <= 1.0) return s - s * s * s / 3.0;
    return s * s * s / 3.0 - s + 4.0 / 3.0;
  };
  return 2.0 * std::abs(prim(b) - prim(a));
}

}  // namespace

TEST_CASE("well distance") {
  const auto w = make_builtin("scalar-double-well");
  const Point x = make_point({0.3});
  CHECK(well_distance(w, x, make_state({-1.0}), make_state({1.0})) ==
        doctest::Approx(kSigma).epsilon(1e-10));
  CHECK(well_distance(w, x, make_state({0.0}), make_state({1.0})) ==
        doctest::Approx(scalar_oracle(0.0, 1.0)).epsilon(1e-10));
  CHECK(well_distance(w, x, make_state({0.2}), make_state({0.2})) == 0.0);
}

TEST_CASE("one-dimensional limit energy") {
  const auto w = make_builtin("scalar-double-well");
  CHECK(F0_energy_1d(w, {{}, {0}}).total == 0.0);
  const auto one = F0_energy_1d(w, {{0.1}, {0, 1}});
  CHECK(one.total == doctest::Approx(kSigma).epsilon(1e-3));
  const auto two = F0_energy_1d(w, {{-0.3, 0.4}, {0, 1, 0}});
  REQUIRE(two.parts.size() == 2);
  CHECK(two.total == doctest::Approx(two.parts[0] + two.parts[1]));
  CHECK(two.total >= one.total);
  CHECK_THROWS_AS(F0_energy_1d(w, {{0.1}, {0, 0}}), ParameterError);
  CHECK_THROWS_AS(F0_energy_1d(w, {{0.4, -0.3}, {0, 1, 0}}), ParameterError);
  CHECK_THROWS_AS(F0_energy_1d(w, {{1.5}, {0, 1}}), ParameterError);

  const auto m = make_builtin("modulated");
  CHECK(F0_energy_1d(m, {{0.5}, {0, 1}}).total ==
        doctest::Approx(std::sqrt(1.25) * kSigma).epsilon(1e-6));
}

TEST_CASE("two-dimensional limit energy") {
  const auto w = planar_wells();
  const double sigma = geodesic_distance(w, make_point({0.5, 0.5}), make_state({-1.0, 0.0}),
                                         make_state({1.0, 0.0}))
                           .cost;
  InterfaceMesh2D mesh;
  mesh.segments.push_back({make_point({0.5, 0.0}), make_point({0.5, 1.0}), 0, 1});
  CHECK(F0_energy_2d(w, mesh).total == doctest::Approx(sigma).epsilon(1e-9));

  const auto s = square_double_well();
  CHECK(F0_energy_2d(s, mesh).total == doctest::Approx(kSigma).epsilon(1e-3));

  InterfaceMesh2D empty;
  CHECK(F0_energy_2d(w, empty).total == 0.0);
  InterfaceMesh2D degenerate;
  degenerate.segments.push_back({make_point({0.3, 0.3}), make_point({0.3, 0.3}), 0, 1});
  CHECK(F0_energy_2d(w, degenerate).total == 0.0);
  CHECK_THROWS_AS(F0_energy_2d(w, mesh, 1), ParameterError);
}

TEST_CASE("quadrature refinement on an x-dependent tension") {
  const auto w = make_builtin(
      "modulated", {{"domain", {{"lo", {-1.0, -1.0}}, {"hi", {1.0, 1.0}}}}});
  InterfaceMesh2D mesh;
  mesh.segments.push_back({make_point({-0.8, -0.9}), make_point({0.7, 0.6}), 0, 1});
  mesh.segments.push_back({make_point({0.7, 0.6}), make_point({0.9, -0.5}), 0, 1});
  double previous = 0.0, change = 1e300;
  for (int q : {2, 4, 8, 16}) {
    const double e = F0_energy_2d(w, mesh, q, nullptr, 2).total;
    if (previous > 0.0) {
      const double c = std::abs(e - previous);
      CHECK(c <= change);
      change = c;
    }
    previous = e;
  }
  CHECK(change <= 1e-3 * previous);
}

TEST_CASE("tension cache") {
  const auto w = make_builtin("modulated");
  TensionCache cache(w);
  const double a = cache(make_point({0.25}), 0, 1);
  const double b = cache(make_point({0.25 + 1e-9}), 1, 0);
  CHECK(a == b);
  CHECK(cache.size() == 1);
  CHECK(cache.hits() == 1);
  CHECK(a == doctest::Approx(std::sqrt(1.0625) * kSigma).epsilon(1e-9));

  std::vector<std::thread> pool;
  std::vector<double> out(4);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] { out[t] = cache(make_point({-0.5}), 0, 1); });
  }
  for (auto& t : pool) t.join();
  for (double v : out) CHECK(v == out[0]);
  CHECK(cache.size() == 2);
}

TEST_CASE("minimal jump") {
  SUBCASE("modulated wells prefer the middle") {
    const auto r = minimal_jump_1d(make_builtin("modulated"), 0, 1);
    CHECK(std::abs(r.x) <= 1e-4);
    CHECK(r.energy == doctest::Approx(kSigma).epsilon(1e-6));
  }
  SUBCASE("mass decides the jump") {
    const auto w = make_builtin("scalar-double-well");
    const auto r = minimal_jump_1d(w, 0, 1, make_state({0.0}));
    CHECK(std::abs(r.x) <= 1e-6);
    CHECK(r.energy == doctest::Approx(kSigma).epsilon(1e-6));
    const auto s = minimal_jump_1d(w, 0, 1, make_state({0.5}));
    CHECK(s.x == doctest::Approx(-0.25).epsilon(1e-6));
    CHECK(two_phase_mass(*w, 0, 1, s.x)(0) == doctest::Approx(0.5));
  }
  SUBCASE("errors") {
    const auto w = make_builtin("scalar-double-well");
    CHECK_THROWS_AS(minimal_jump_1d(w, 0, 0), ParameterError);
    CHECK_THROWS_AS(minimal_jump_1d(w, 0, 1, make_state({2.5})), InfeasibleError);
  }
}

TEST_CASE("Dirichlet penalty") {
  const auto w = make_builtin("scalar-double-well");
  const State a = make_state({-1.0}), b = make_state({1.0});
  CHECK(dirichlet_energy_1d(w, {{}, {0}}, a, a) == 0.0);
  CHECK(dirichlet_energy_1d(w, {{}, {0}}, a, b) == doctest::Approx(kSigma).epsilon(1e-10));
  const double p = 0.3;
  CHECK(dirichlet_energy_1d(w, {{}, {0}}, a, make_state({p})) ==
        doctest::Approx(scalar_oracle(-1.0, p)).epsilon(1e-10));
  CHECK(dirichlet_energy_1d(w, {{0.2}, {0, 1}}, a, make_state({p})) ==
        doctest::Approx(kSigma + scalar_oracle(1.0, p)).epsilon(1e-3));

  SUBCASE("2D box boundary") {
    const auto s = square_double_well();
    InterfaceMesh2D none;
    const auto lower = [](const Point&) { return 0; };
    // trace -1 everywhere against data -1 on the left side, 0 elsewhere
    const auto g = [](const Point& x) { return make_state({x(0) <= 0.0 ? -1.0 : 0.0}); };
    const double e = dirichlet_energy_2d(s, none, lower, g);
    CHECK(e == doctest::Approx(3.0 * scalar_oracle(-1.0, 0.0)).epsilon(1e-3));
  }
}

TEST_CASE("non-separated wells") {
  const auto w = make_builtin("product-distance");
  const auto rows = counterexample_table(w, {0.2, 0.5, 1.0});
  for (const auto& r : rows) {
    CAPTURE(r.x1);
    CHECK(r.bound == doctest::Approx(std::pow(r.x1, 6)));
    CHECK(r.within);
    CHECK(r.distance > 0.0);
  }
  const auto levels = counterexample_refinement(w, {0.5, 0.25});
  REQUIRE(levels.size() == 2);
  CHECK(levels[1].plain > levels[0].plain);
  CHECK(levels[1].weighted >= levels[0].weighted);
}

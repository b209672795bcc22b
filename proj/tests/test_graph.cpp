#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "wgeom/graph.hpp"
#include "wgeom/rng.hpp"

using namespace wgeom;
using Catch::Approx;

TEST_CASE("area element of the graph presets", "[graph]") {
  CHECK(graph_slope(GraphFunction::constant(2, 0.4), make_vector({1.0, 2.0})) == 1.0);
  CHECK(graph_slope(GraphFunction::linear(make_vector({1.0, 0.0})), make_vector({0.5, -2.0})) == Approx(std::sqrt(2.0)));
  CHECK(graph_slope(GraphFunction::parabola(2), make_vector({1.0, 0.0})) == Approx(std::sqrt(5.0)));
}

TEST_CASE("graph mean curvature closed forms", "[graph]") {
  const GraphFunction p = GraphFunction::parabola(2);
  CHECK(graph_mean_curvature(p, make_vector({0.0, 0.3})) == Approx(2.0));
  CHECK(graph_mean_curvature(p, make_vector({1.0, -4.0})) == Approx(2.0 / std::pow(5.0, 1.5)).epsilon(1e-14));
  CHECK(graph_mean_curvature(GraphFunction::linear(make_vector({0.7, -0.2}), 3.0), make_vector({1.0, 1.0})) == 0.0);
  CHECK(upward_normal(p, make_vector({1.0, 0.0}))(2) > 0.0);
}

TEST_CASE("analytic Hessians agree with differences of the gradient", "[graph]") {
  CounterRng rng(kDefaultSeed, 21);
  for (const char* name : {"parabola", "sinusoid", "random_bump"}) {
    for (int n : {1, 2, 3}) {
      const GraphFunction u = GraphFunction::from_name(name, n, 5);
      const GraphFunction fd(n, "fd", [u](const Vector& x) { return u.value(x); },
                             [u](const Vector& x) { return u.gradient(x); });
      for (int k = 0; k < 20; ++k) {
        const Vector x = rng.uniform_vector(n, -3.0, 3.0);
        INFO(name << " n=" << n);
        CHECK((u.hessian(x) - fd.hessian(x)).norm() <= 1e-6);
        Vector g(n);
        for (int i = 0; i < n; ++i) {
          Vector a = x, b = x;
          a(i) += 1e-6;
          b(i) -= 1e-6;
          g(i) = (u.value(a) - u.value(b)) / 2e-6;
        }
        CHECK((u.gradient(x) - g).norm() <= 1e-8);
      }
    }
  }
}

TEST_CASE("weighted mean curvature of graphs", "[graph]") {
  const Density D = Density::gauss_times_line(2);
  CounterRng rng(kDefaultSeed, 22);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.uniform_vector(2, -3.0, 3.0);
    CHECK(graph_weighted_mean_curvature(GraphFunction::constant(2, 1.3), D, x).weighted_mean_curvature == 0.0);
  }
  const CurvatureReport r =
      graph_weighted_mean_curvature(GraphFunction::linear(make_vector({1.0, 0.0})), D, make_vector({1.0, 0.0}));
  CHECK(r.mean_curvature == 0.0);
  CHECK(r.density_term == Approx(-1.0 / std::sqrt(2.0)));
  CHECK(r.weighted_mean_curvature == Approx(-0.7071067811865476));
}

TEST_CASE("z = x^2 is weighted minimal under the z^2 - ln sqrt(1+4z) profile", "[graph]") {
  const Density D = Density::product(Density::gaussian(2), Profile::paper_example());
  const GraphFunction u = GraphFunction::parabola(2);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double x = -3.0 + 6.0 * k / 199.0;
    worst = std::max(worst, std::abs(graph_weighted_mean_curvature(u, D, make_vector({x, 0.8})).weighted_mean_curvature));
  }
  CHECK(worst <= 1e-8);
  // the same graph is not weighted minimal in G^2 x R
  CHECK(std::abs(graph_weighted_mean_curvature(u, Density::gauss_times_line(2), make_vector({1.0, 0.0}))
                     .weighted_mean_curvature) > 0.1);
}

TEST_CASE("hyperplane classification", "[graph]") {
  const double root = (-1.0 + std::sqrt(17.0)) / 8.0;
  const Profile h = Profile::paper_example();
  CHECK(hyperplane_minimality(Vector::Zero(2), -root, h) == PlaneClass::minimal_horizontal);
  CHECK(hyperplane_minimality(Vector::Zero(2), -0.5, h) == PlaneClass::not_minimal);
  CHECK(hyperplane_minimality(Vector::Zero(2), 1.0, h) == PlaneClass::not_minimal);  // below the domain
  CHECK(hyperplane_minimality(make_vector({1.0, 0.0}), 0.3, h) == PlaneClass::not_minimal);

  for (double s : {0.5, 1.0, 2.0}) {
    CHECK(hyperplane_minimality(Vector::Zero(2), s, -0.2, Profile::linear(s)) == PlaneClass::not_minimal);
    CHECK(hyperplane_minimality(make_vector({0.3, 0.4}), 0.7, Profile::linear(s)) == PlaneClass::not_minimal);
  }

  // quadratic h = z^2/2 + c z + b: every plane <a, x> + z + c = 0 is minimal
  const Profile q = Profile::quadratic(0.6, -2.0);
  CHECK(hyperplane_minimality(make_vector({1.0, 0.0}), 0.6, q) == PlaneClass::minimal_tilted);
  CHECK(hyperplane_minimality(make_vector({-0.5, 2.0}), 0.6, q) == PlaneClass::minimal_tilted);
  CHECK(hyperplane_minimality(make_vector({1.0, 0.0}), 0.5, q) == PlaneClass::not_minimal);
  CHECK(hyperplane_minimality(Vector::Zero(2), 0.6, q) == PlaneClass::minimal_horizontal);
}

TEST_CASE("classification is invariant under rescaling the equation", "[graph][property]") {
  CounterRng rng(kDefaultSeed, 23);
  const std::vector<Profile> profiles = {Profile::quadratic(0.6, 1.0), Profile::linear(1.0), Profile::paper_example()};
  for (const Profile& h : profiles) {
    for (int k = 0; k < 30; ++k) {
      const Vector a = k % 3 == 0 ? Vector(Vector::Zero(2)) : rng.normal_vector(2);
      const double c = k % 2 == 0 ? 0.6 : rng.uniform(-1.0, 0.0);
      const double lambda = rng.uniform(0.1, 5.0) * (k % 4 == 1 ? -1.0 : 1.0);
      CHECK(hyperplane_minimality(Vector(lambda * a), lambda, lambda * c, h) == hyperplane_minimality(a, c, h));
    }
  }
  CHECK_THROWS_AS(hyperplane_minimality(make_vector({1.0}), 0.0, 1.0, Profile::linear()), std::invalid_argument);
}

TEST_CASE("horizontal minimal planes", "[graph]") {
  // oracle: 4a^2 + a - 1 = 0
  const double oracle = (-1.0 + std::sqrt(1.0 + 16.0)) / 8.0;
  const PlaneRoots roots = horizontal_plane_roots(Profile::paper_example(), 0.0, 2.0);
  REQUIRE(roots.roots.size() == 1);
  CHECK(std::abs(roots.roots[0] - oracle) <= 1e-10);
  CHECK(std::abs(roots.roots[0] - (1.0 + std::sqrt(17.0)) / 8.0) > 0.2);
  CHECK(std::abs(Profile::paper_example().derivative(roots.roots[0])) <= 1e-10);

  const PlaneRoots q = horizontal_plane_roots(Profile::quadratic(0.0), -1.0, 1.0);
  REQUIRE(q.roots.size() == 1);
  CHECK(std::abs(q.roots[0]) <= 1e-12);

  const PlaneRoots c = horizontal_plane_roots(Profile::constant(), -1.0, 1.0);
  CHECK(c.identically_zero);
  CHECK(c.roots.empty());

  CHECK(horizontal_plane_roots(Profile::linear(2.0), -5.0, 5.0).roots.empty());
  CHECK_THROWS_AS(horizontal_plane_roots(Profile::paper_example(), -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(horizontal_plane_roots(Profile::linear(), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Bernstein functional", "[graph]") {
  CHECK(bernstein_functional(GraphFunction::constant(2, 0.0)) == Approx(1.0).margin(1e-9));
  CHECK(bernstein_functional(GraphFunction::linear(make_vector({1.0, 0.0}))) == Approx(std::sqrt(2.0)).margin(1e-6));
  CHECK(bernstein_functional(GraphFunction::linear(make_vector({0.1, 0.0}))) == Approx(std::sqrt(1.01)).margin(1e-6));
}

TEST_CASE("non-constant graphs have weighted area above one", "[graph][property]") {
  for (int n : {1, 2, 3}) {
    for (const char* name : {"linear:0.05", "parabola", "sinusoid", "random_bump", "sinusoid:0.01"}) {
      const GraphFunction u = GraphFunction::from_name(name, n, 17);
      INFO(name << " n=" << n);
      CHECK(bernstein_functional(u) > 1.0 + 1e-8);
    }
    CHECK(bernstein_functional(GraphFunction::constant(n, -2.0)) == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("Bernstein functional against an independent 1D oracle", "[graph]") {
  // u = x^2 in one dimension: int phi(x) sqrt(1 + 4x^2) dx on [-8, 8] by Simpson
  const int N = 20000;
  const double a = -8.0, b = 8.0, h = (b - a) / N;
  double s = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double x = a + i * h;
    const double f = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * std::sqrt(1.0 + 4.0 * x * x);
    s += f * (i == 0 || i == N ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
  }
  s *= h / 3.0;
  CHECK(bernstein_functional(GraphFunction::parabola(1)) == Approx(s).epsilon(1e-10));
}

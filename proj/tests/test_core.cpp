#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "wgeom/quadrature.hpp"
#include "wgeom/rng.hpp"

using namespace wgeom;
using Catch::Approx;

TEST_CASE("counter streams are pure functions of seed and stream", "[rng]") {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
}

TEST_CASE("uniform draws stay in [0, 1) and have the right mean", "[rng]") {
  CounterRng rng(kDefaultSeed, 0);
  double sum = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12 / N) ~ 6.5e-4
  CHECK(std::abs(sum / N - 0.5) < 4e-3);
}

TEST_CASE("normal draws have unit variance", "[rng]") {
  CounterRng rng(kDefaultSeed, 1);
  double s1 = 0.0, s2 = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(std::abs(s1 / N) < 0.015);
  CHECK(std::abs(s2 / N - 1.0) < 0.02);
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly", "[quadrature]") {
  for (int order : {1, 2, 5, 16, 64}) {
    const QuadratureRule rule = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == Approx(2.0).epsilon(1e-14));
    const int deg = 2 * order - 1;
    double moment = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) moment += rule.weights[i] * std::pow(rule.nodes[i], deg - 1);
    // even power deg-1: integral over [-1, 1] is 2/deg
    CHECK(moment == Approx(2.0 / deg).epsilon(1e-13));
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i - 1] < rule.nodes[i]);
  }
}

TEST_CASE("mapped and composite rules", "[quadrature]") {
  const QuadratureRule r = gauss_legendre(20, 0.0, std::numbers::pi);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::sin(r.nodes[i]);
  CHECK(s == Approx(2.0).epsilon(1e-14));

  const QuadratureRule c = composite_gauss_legendre(8, 10, -3.0, 3.0);
  REQUIRE(c.nodes.size() == 80);
  double g = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) g += c.weights[i] * std::exp(-0.5 * c.nodes[i] * c.nodes[i]);
  CHECK(g == Approx(std::sqrt(2.0 * std::numbers::pi) * std::erf(3.0 / std::sqrt(2.0))).epsilon(1e-13));
}

TEST_CASE("bad quadrature arguments throw", "[quadrature]") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(composite_gauss_legendre(4, 0, 0.0, 1.0), std::invalid_argument);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wgeom/calibration.hpp"
#include "wgeom/rng.hpp"

using namespace wgeom;
using Catch::Approx;

namespace {

const std::vector<const char*> kPresets = {"constant:0.4", "linear:0.5,-0.3", "parabola", "sinusoid", "random_bump"};

// div Nbar by central differences, no density.
double plain_divergence(const ExtendedNormalField& field, const Vector& y, double h = 1e-4) {
  double div = 0.0;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    Vector a = y, b = y;
    a(k) += h;
    b(k) -= h;
    div += (field(a)(k) - field(b)(k)) / (2.0 * h);
  }
  return div;
}

}  // namespace

TEST_CASE("the form restricted to the graph is its volume form", "[calibration]") {
  CounterRng rng(kDefaultSeed, 41);
  for (const char* name : kPresets) {
    const GraphFunction u = GraphFunction::from_name(name, 2);
    const ExtendedNormalField field(u);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.uniform_vector(2, -3.0, 3.0);
      Vector y(3);
      y << x, rng.uniform(-2.0, 2.0);
      CHECK(calibration_value(field, y, tangent_frame(u, x)) == Approx(1.0).epsilon(1e-13));
      Matrix frame = random_orthonormal_frame(rng, 2);
      frame.col(1) = field(y);
      CHECK(std::abs(calibration_value(field, y, frame)) <= 1e-15);
    }
  }
}

TEST_CASE("comass bound", "[calibration][property]") {
  CHECK(comass_check(GraphFunction::parabola(2), 10000).max_abs <= 1.0 + kComassSlack);
  for (int n = 1; n <= 3; ++n) {
    const ComassResult c = comass_check(GraphFunction::random_bump(n, 8), 5000, 123);
    CHECK(c.trials == 5000);
    CHECK(c.max_abs <= 1.0 + kComassSlack);
    CHECK(c.max_abs > 0.5);
  }
  CHECK_THROWS_AS(comass_check(GraphFunction::parabola(2), 0), std::invalid_argument);
}

TEST_CASE("div Nbar = -H on the graph", "[calibration][property]") {
  CounterRng rng(kDefaultSeed, 42);
  for (const char* name : kPresets) {
    const GraphFunction u = GraphFunction::from_name(name, 2);
    const ExtendedNormalField field(u);
    for (int k = 0; k < 50; ++k) {
      const Vector x = rng.uniform_vector(2, -3.0, 3.0);
      Vector y(3);
      y << x, u.value(x);
      CHECK(plain_divergence(field, y) == Approx(-graph_mean_curvature(u, x)).margin(1e-6));
    }
  }
}

TEST_CASE("closedness identity for every preset", "[calibration][property]") {
  const Density D = Density::gauss_times_line(2);
  CounterRng rng(kDefaultSeed, 43);
  for (const char* name : kPresets) {
    const GraphFunction u = GraphFunction::from_name(name, 2);
    for (int k = 0; k < 100; ++k) {
      Vector y(3);
      y << rng.uniform_vector(2, -3.0, 3.0), rng.uniform(-3.0, 3.0);
      INFO(name);
      CHECK(std::abs(closedness_residual(u, D, y).residual) <= 1e-4);
    }
  }
}

TEST_CASE("closedness on weighted-minimal graphs", "[calibration]") {
  CounterRng rng(kDefaultSeed, 44);
  for (int n = 1; n <= 3; ++n) {
    const GraphFunction u = GraphFunction::constant(n, -1.2);
    for (int k = 0; k < 20; ++k) {
      const Vector y = rng.uniform_vector(n + 1, -3.0, 3.0);
      CHECK(std::abs(closedness_residual(u, Density::gauss_times_line(n), y).divergence) <= 1e-6);
    }
  }
  const Density D = Density::product(Density::gaussian(2), Profile::paper_example());
  const GraphFunction p = GraphFunction::parabola(2);
  for (int k = 0; k < 50; ++k) {
    const Vector x = rng.uniform_vector(2, -2.5, 2.5);
    Vector y(3);
    y << x, p.value(x);
    const ClosednessReport r = closedness_residual(p, D, y);
    CHECK(std::abs(r.divergence) <= 1e-4);
    CHECK(std::abs(r.weighted_curvature) <= 1e-8);
  }
}

TEST_CASE("closedness for the plane z = x_1 at (1, 0, 0)", "[calibration]") {
  const Density D = Density::gauss_times_line(2);
  const Vector y = make_vector({1.0, 0.0, 0.0});
  const ClosednessReport r = closedness_residual(GraphFunction::linear(make_vector({1.0, 0.0})), D, y);
  // Nbar is constant, so div(e^{-F} Nbar) = -e^{-F} <grad F, Nbar> = e^{-F} / sqrt 2 here
  const double weight = std::exp(-0.5) / (2.0 * std::numbers::pi);
  CHECK(r.weight == Approx(weight).epsilon(1e-14));
  CHECK(r.divergence == Approx(weight / std::sqrt(2.0)).epsilon(1e-7));
  CHECK(r.weighted_curvature == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("closedness residual does not depend on the height", "[calibration][property]") {
  const Density D = Density::gauss_times_line(2);
  CounterRng rng(kDefaultSeed, 45);
  for (const char* name : kPresets) {
    const GraphFunction u = GraphFunction::from_name(name, 2);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.uniform_vector(2, -3.0, 3.0);
      Vector y0(3), y1(3);
      y0 << x, 0.0;
      y1 << x, rng.uniform(-5.0, 5.0);
      CHECK(std::abs(closedness_residual(u, D, y0).residual - closedness_residual(u, D, y1).residual) <= 1e-8);
    }
  }
}

TEST_CASE("half ball sits inside the vertical cylinder over the disc", "[calibration]") {
  // B^{n+1}_+(0, R) is contained in B^n(0, R) x [0, R]
  CounterRng rng(kDefaultSeed, 46);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 2000; ++k) {
      Vector y = rng.normal_vector(n + 1);
      y *= 2.0 * std::pow(rng.uniform(), 1.0 / (n + 1)) / y.norm();
      y(n) = std::abs(y(n));
      CHECK(y.head(n).norm() <= 2.0);
      CHECK(y(n) <= 2.0);
    }
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "wgeom/flow.hpp"
#include "wgeom/graph.hpp"

using namespace wgeom;
using Catch::Approx;

namespace {

FlowResult run(const GraphFunction& u0, const Density& D, double L, int m, double t_max,
               StopCriteria stop = StopCriteria{}) {
  const GridField grid = GridField::sample(u0, L, m);
  const FlowDiscretization disc(grid, D);
  return flow_run(FlowState::start(grid, disc), disc, t_max, stop);
}

// never satisfied, so the run always reaches t_max
const StopCriteria kNoStop{-1.0, -1.0};

double max_abs_diff_on_coarse(const GridField& coarse, const GridField& fine) {
  double worst = 0.0;
  for (int i = 0; i < coarse.nodes_per_axis; ++i) {
    worst = std::max(worst, std::abs(coarse.values[static_cast<std::size_t>(i)] - fine.values[static_cast<std::size_t>(2 * i)]));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid fields", "[flow]") {
  const GridField g = GridField::sample(GraphFunction::parabola(2), 2.0, 5);
  CHECK(g.size() == 25);
  CHECK(g.spacing() == 1.0);
  CHECK(g.node(7)(0) == 0.0);  // i = 2, j = 1
  CHECK(g.node(7)(1) == -1.0);
  CHECK(g.values[8] == 1.0);  // x = 1
  CHECK(g.all_finite());
  CHECK_THROWS_AS(GridField(3, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(GridField(1, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(GridField(1, 0.0, 5), std::invalid_argument);
}

TEST_CASE("discrete H_F converges to the continuous one", "[flow]") {
  const Density D = Density::gauss_times_line(1);
  const GraphFunction u = GraphFunction::sinusoid(1);
  double prev = 0.0;
  for (int m : {65, 129, 257}) {
    const GridField g = GridField::sample(u, 4.0, m);
    const FlowDiscretization disc(g, D);
    const std::vector<double> hf = disc.weighted_curvature(g.values);
    double worst = 0.0;
    for (int i = 1; i + 1 < m; ++i) {
      const double exact = graph_weighted_mean_curvature(u, D, g.node(static_cast<std::size_t>(i))).weighted_mean_curvature;
      worst = std::max(worst, std::abs(hf[static_cast<std::size_t>(i)] - exact));
    }
    if (prev > 0.0) CHECK(prev / worst > 3.5);  // second order
    prev = worst;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("discrete area approximates the weighted area", "[flow]") {
  // u constant over [-4, 4]: Gaussian mass of the interval
  const GridField g = GridField::sample(GraphFunction::constant(1, 0.3), 4.0, 513);
  const FlowDiscretization disc(g, Density::gauss_times_line(1));
  CHECK(disc.area(g.values) == Approx(std::erf(4.0 / std::sqrt(2.0))).epsilon(1e-5));
}

TEST_CASE("constant data is a fixed point", "[flow]") {
  for (int n : {1, 2}) {
    const GridField g = GridField::sample(GraphFunction::constant(n, 0.7), 4.0, 33);
    const FlowDiscretization disc(g, Density::gauss_times_line(n));
    FlowState s = FlowState::start(g, disc);
    for (int k = 0; k < 10; ++k) s = flow_step(std::move(s), disc);
    for (double v : s.field.values) CHECK(v == 0.7);
    const FlowResult r = run(GraphFunction::constant(n, 0.7), Density::gauss_times_line(n), 4.0, 33, 5.0);
    CHECK(r.verdict == FlowVerdict::converged_to_constant);
    CHECK(r.state.time == 0.0);
    CHECK(*r.limit_constant == Approx(0.7).epsilon(1e-15));
  }
}

TEST_CASE("first step strictly lowers the weighted area", "[flow]") {
  const GridField g = GridField::sample(GraphFunction::sinusoid(1), 4.0, 257);
  const FlowDiscretization disc(g, Density::gauss_times_line(1));
  const FlowState s0 = FlowState::start(g, disc);
  const FlowState s1 = flow_step(s0, disc);
  CHECK(s1.latest().weighted_area < s0.latest().weighted_area);
  CHECK(s1.time == Approx(s0.dt));
  CHECK(s0.dt == Approx(0.4 * g.spacing() * g.spacing() / 2.0));
}

TEST_CASE("weighted area is non-increasing along the flow", "[flow][property]") {
  const std::vector<std::pair<GraphFunction, Density>> cases = {
      {GraphFunction::sinusoid(1), Density::gauss_times_line(1)},
      {GraphFunction::linear(make_vector({0.4})), Density::gauss_times_line(1)},
      {GraphFunction::random_bump(1, 3, 0.5), Density::product(Density::gaussian(1), Profile::quadratic(0.2))},
      {GraphFunction::random_bump(2, 42), Density::gauss_times_line(2)},
      {GraphFunction::sinusoid(2, 0.3), Density::product(Density::gaussian(2), Profile::quadratic(0.0))}};
  for (const auto& [u, D] : cases) {
    const FlowResult r = run(u, D, 4.0, u.dimension() == 1 ? 129 : 33, 2.0, kNoStop);
    REQUIRE(r.verdict == FlowVerdict::max_time_reached);
    CHECK(r.state.time == Approx(2.0).epsilon(1e-12));
    for (std::size_t k = 1; k < r.state.history.size(); ++k) {
      CHECK(r.state.history[k].weighted_area <= r.state.history[k - 1].weighted_area + kAreaIncreaseTolerance);
    }
  }
}

TEST_CASE("sinusoid flattens to a constant", "[flow]") {
  const FlowResult r = run(GraphFunction::sinusoid(1), Density::gauss_times_line(1), 4.0, 257, 50.0);
  REQUIRE(r.verdict == FlowVerdict::converged_to_constant);
  CHECK(r.state.time < 50.0);
  CHECK(r.state.latest().oscillation <= 0.005);
  // odd data has mean zero, and so does the limit
  CHECK(std::abs(*r.limit_constant) <= 1e-10);
  // flat at convergence
  const auto& v = r.state.field.values;
  double slope = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) slope = std::max(slope, std::abs(v[i] - v[i - 1]) / r.state.field.spacing());
  CHECK(slope <= 10.0 * 0.005 / 4.0);
}

TEST_CASE("linear data moves toward a constant", "[flow]") {
  const FlowResult r = run(GraphFunction::linear(make_vector({0.3}), 0.2), Density::gauss_times_line(1), 4.0, 129, 5.0);
  CHECK(r.state.latest().oscillation < 0.5 * r.state.history.front().oscillation);
}

TEST_CASE("odd symmetry is preserved", "[flow][property]") {
  const FlowResult r1 = run(GraphFunction::sinusoid(1), Density::gauss_times_line(1), 4.0, 129, 1.0, kNoStop);
  const auto& v = r1.state.field.values;
  double asym = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) asym = std::max(asym, std::abs(v[i] + v[v.size() - 1 - i]));
  CHECK(asym <= 1e-10);

  // point reflection in 2D
  const double k = std::numbers::pi / 4.0;
  const GraphFunction odd2(
      2, "odd", [k](const Vector& x) { return 0.3 * std::sin(k * x(0)) * std::cos(0.5 * k * x(1)) + 0.2 * std::sin(k * x(1)); },
      [k](const Vector& x) {
        return make_vector({0.3 * k * std::cos(k * x(0)) * std::cos(0.5 * k * x(1)),
                            -0.15 * k * std::sin(k * x(0)) * std::sin(0.5 * k * x(1)) + 0.2 * k * std::cos(k * x(1))});
      });
  const FlowResult r2 = run(odd2, Density::gauss_times_line(2), 4.0, 33, 1.0, kNoStop);
  const auto& w = r2.state.field.values;
  asym = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) asym = std::max(asym, std::abs(w[i] + w[w.size() - 1 - i]));
  CHECK(asym <= 1e-10);
}

TEST_CASE("2D random bump oscillation decays tenfold by t = 10", "[flow]") {
  const FlowResult r = run(GraphFunction::random_bump(2, kDefaultSeed, 0.3), Density::gauss_times_line(2), 4.0, 65, 10.0, kNoStop);
  CHECK(r.state.latest().oscillation < 0.1 * r.state.history.front().oscillation);
}

TEST_CASE("grid refinement is second order", "[flow]") {
  std::vector<GridField> fields;
  for (int m : {65, 129, 257}) {
    fields.push_back(run(GraphFunction::sinusoid(1), Density::gauss_times_line(1), 4.0, m, 1.0, kNoStop).state.field);
  }
  const double e1 = max_abs_diff_on_coarse(fields[0], fields[1]);
  const double e2 = max_abs_diff_on_coarse(fields[1], fields[2]);
  CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("oversized steps are refused", "[flow]") {
  const GridField g = GridField::sample(GraphFunction::sinusoid(1), 4.0, 65);
  const FlowDiscretization disc(g, Density::gauss_times_line(1));
  FlowState s = FlowState::start(g, disc);
  s.dt *= 2.0;
  CHECK_THROWS_AS(flow_step(s, disc), std::invalid_argument);
  CHECK_THROWS_AS(FlowDiscretization(g, Density::gauss_times_line(2)), std::invalid_argument);
}

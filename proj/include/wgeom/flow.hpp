#pragma once

// Weighted mean-curvature descent for graphs over [-L, L]^n, n in {1, 2}.
//
// The velocity law is u_t = H_F, the gradient flow of the weighted area
// A(u) = int e^{-F(x, u)} sqrt(1 + |grad u|^2) dx in the e^{-F}-weighted
// L^2 inner product, so dA/dt = -int e^{-F} H_F^2 <= 0.
//
// Discretization: the grid is split into simplices (segments for n = 1,
// two triangles per cell for n = 2) carrying piecewise-linear u. The discrete
// area sums e^{-F} W over simplices at their centroids, and the discrete H_F
// at node i is -dA/du_i divided by the lumped node mass. In 1D interior nodes
// this is the conservative central-difference stencil
//     (rho_{i+1/2} s_{i+1/2}/W_{i+1/2} - rho_{i-1/2} s_{i-1/2}/W_{i-1/2}) / (rho_i dx),
// and boundary nodes see no outer flux, which matches ghost-node reflection
// (homogeneous Neumann). Explicit Euler with dt = 0.4 dx^2 / (2n); a step
// that raises the discrete area by more than 1e-12 or produces a non-finite
// value is retried with half the step, at most 10 times.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"
#include "wgeom/graph_function.hpp"

namespace wgeom {

inline constexpr double kFlowSafety = 0.4;
inline constexpr double kAreaIncreaseTolerance = 1e-12;
inline constexpr int kMaxStepRetries = 10;

struct FlowSample {
  double time = 0.0;
  double weighted_area = 0.0;
  double oscillation = 0.0;
  double max_abs_hf = 0.0;
};

class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simplicial mesh of the grid together with the weighted area and its
/// gradient for a fixed density on R^{n+1}.
class FlowDiscretization {
 public:
  FlowDiscretization(const GridField& grid, Density density)
      : n_(grid.n), m_(grid.nodes_per_axis), node_count_(grid.size()), density_(std::move(density)) {
    if (density_.dimension() != n_ + 1) throw std::invalid_argument("flow density must live on R^{n+1}");
    const double dx = grid.spacing();
    separable_ = density_.kind() == Density::Kind::product;
    vertical_constant_ = separable_ && density_.vertical().kind() == Profile::Kind::constant;

    auto add = [&](std::array<int, 3> nodes, int count, std::array<std::array<double, 3>, 2> coeff, double measure) {
      Element e{nodes, count, coeff, measure, Vector::Zero(n_), 1.0};
      for (int k = 0; k < count; ++k) e.centroid += grid.node(static_cast<std::size_t>(nodes[static_cast<std::size_t>(k)]));
      e.centroid /= count;
      if (separable_) e.horizontal_weight = density_.horizontal().weight(e.centroid);
      elements_.push_back(std::move(e));
    };
    if (n_ == 1) {
      for (int i = 0; i + 1 < m_; ++i) add({i, i + 1, 0}, 2, {{{-1.0 / dx, 1.0 / dx, 0.0}, {0.0, 0.0, 0.0}}}, dx);
    } else {
      // Cell (i, j) with corners a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1)
      // split along the a-c diagonal, which the point reflection
      // (x, y) -> (-x, -y) maps to itself.
      for (int j = 0; j + 1 < m_; ++j) {
        for (int i = 0; i + 1 < m_; ++i) {
          const int a = j * m_ + i;
          const int b = a + 1;
          const int c = a + m_ + 1;
          const int d = a + m_;
          const double s = 1.0 / dx;
          // Triangle (a, b, c): u_x = (u_b - u_a)/dx, u_y = (u_c - u_b)/dx.
          add({a, b, c}, 3, {{{-s, s, 0.0}, {0.0, -s, s}}}, 0.5 * dx * dx);
          // Triangle (a, c, d): u_x = (u_c - u_d)/dx, u_y = (u_d - u_a)/dx.
          add({a, c, d}, 3, {{{0.0, s, -s}, {-s, 0.0, s}}}, 0.5 * dx * dx);
        }
      }
    }
    lumped_measure_.assign(node_count_, 0.0);
    for (const auto& e : elements_) {
      for (int k = 0; k < e.count; ++k) lumped_measure_[static_cast<std::size_t>(e.nodes[static_cast<std::size_t>(k)])] += e.measure / e.count;
    }
    node_points_.reserve(node_count_);
    node_horizontal_weight_.reserve(node_count_);
    for (std::size_t k = 0; k < node_count_; ++k) {
      node_points_.push_back(grid.node(k));
      node_horizontal_weight_.push_back(separable_ ? density_.horizontal().weight(node_points_.back()) : 1.0);
    }
  }

  int dimension() const { return n_; }
  const Density& density() const { return density_; }

  /// Discrete weighted area.
  double area(const std::vector<double>& u) const {
    double total = 0.0;
    for (const auto& e : elements_) {
      const Local l = local(e, u);
      total += e.measure * l.weight * l.W;
    }
    return total;
  }

  /// Discrete H_F at every node: -dA/du_i / (lumped mass_i).
  std::vector<double> weighted_curvature(const std::vector<double>& u) const {
    std::vector<double> grad(node_count_, 0.0);
    for (const auto& e : elements_) {
      const Local l = local(e, u);
      for (int k = 0; k < e.count; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        double dW = 0.0;
        for (int d = 0; d < n_; ++d) dW += e.coeff[static_cast<std::size_t>(d)][kk] * l.g[static_cast<std::size_t>(d)];
        dW /= l.W;
        const double dz = -l.dF_dz * l.W / e.count;
        grad[static_cast<std::size_t>(e.nodes[kk])] += e.measure * l.weight * (dW + dz);
      }
    }
    std::vector<double> hf(node_count_);
    for (std::size_t i = 0; i < node_count_; ++i) hf[i] = -grad[i] / (lumped_measure_[i] * node_weight(i, u[i]));
    return hf;
  }

 private:
  struct Element {
    std::array<int, 3> nodes;
    int count;
    std::array<std::array<double, 3>, 2> coeff;  // gradient = coeff * u_local
    double measure;
    Vector centroid;
    double horizontal_weight;
  };

  struct Local {
    std::array<double, 2> g{0.0, 0.0};
    double W = 1.0;
    double weight = 1.0;  // e^{-F(centroid, mean u)}
    double dF_dz = 0.0;
  };

  Local local(const Element& e, const std::vector<double>& u) const {
    Local l;
    double mean = 0.0;
    for (int k = 0; k < e.count; ++k) {
      const double uk = u[static_cast<std::size_t>(e.nodes[static_cast<std::size_t>(k)])];
      mean += uk;
      for (int d = 0; d < n_; ++d) l.g[static_cast<std::size_t>(d)] += e.coeff[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] * uk;
    }
    mean /= e.count;
    double g2 = 0.0;
    for (int d = 0; d < n_; ++d) g2 += l.g[static_cast<std::size_t>(d)] * l.g[static_cast<std::size_t>(d)];
    l.W = std::sqrt(1.0 + g2);
    if (vertical_constant_) {
      l.weight = e.horizontal_weight * std::exp(-density_.vertical().value(0.0));
    } else if (separable_) {
      const Profile& h = density_.vertical();
      l.weight = e.horizontal_weight * std::exp(-h.value(mean));
      l.dF_dz = h.derivative(mean);
    } else {
      Vector y(n_ + 1);
      y.head(n_) = e.centroid;
      y(n_) = mean;
      l.weight = density_.weight(y);
      l.dF_dz = density_.grad_log_weight(y)(n_);
    }
    return l;
  }

  double node_weight(std::size_t i, double ui) const {
    if (vertical_constant_) return node_horizontal_weight_[i] * std::exp(-density_.vertical().value(0.0));
    if (separable_) return node_horizontal_weight_[i] * std::exp(-density_.vertical().value(ui));
    Vector y(n_ + 1);
    y.head(n_) = node_points_[i];
    y(n_) = ui;
    return density_.weight(y);
  }

  int n_;
  int m_;
  std::size_t node_count_;
  Density density_;
  bool separable_ = false;
  bool vertical_constant_ = false;
  std::vector<Element> elements_;
  std::vector<double> lumped_measure_;
  std::vector<Vector> node_points_;
  std::vector<double> node_horizontal_weight_;
};

struct FlowState {
  GridField field;
  double time = 0.0;
  double dt = 0.0;
  std::vector<FlowSample> history;

  /// Largest stable step for the grid: safety * dx^2 / (2n).
  static double stable_dt(const GridField& g) {
    const double dx = g.spacing();
    return kFlowSafety * dx * dx / (2.0 * g.n);
  }

  /// Initial state at t = 0 with the stable step and one history sample.
  static FlowState start(GridField field, const FlowDiscretization& disc) {
    FlowState s{std::move(field), 0.0, 0.0, {}};
    s.dt = stable_dt(s.field);
    s.history.push_back(sample(s.field.values, 0.0, disc));
    return s;
  }

  static FlowSample sample(const std::vector<double>& u, double t, const FlowDiscretization& disc) {
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    const std::vector<double> hf = disc.weighted_curvature(u);
    double max_hf = 0.0;
    for (double v : hf) max_hf = std::max(max_hf, std::abs(v));
    return {t, disc.area(u), *hi - *lo, max_hf};
  }

  const FlowSample& latest() const { return history.back(); }
};

namespace detail {

struct AcceptedStep {
  std::vector<double> values;
  double dt = 0.0;
  int retries = 0;
};

inline AcceptedStep try_step(const FlowState& s, const FlowDiscretization& disc, double max_step) {
  if (s.dt > FlowState::stable_dt(s.field) * (1.0 + 1e-12)) throw std::invalid_argument("dt exceeds the stability bound");
  const std::vector<double>& u = s.field.values;
  const std::vector<double> velocity = disc.weighted_curvature(u);
  const double area_before = s.latest().weighted_area;
  double dt = std::min(s.dt, max_step);
  for (int attempt = 0; attempt <= kMaxStepRetries; ++attempt) {
    std::vector<double> next(u.size());
    bool finite = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      next[i] = u[i] + dt * velocity[i];
      finite = finite && std::isfinite(next[i]);
    }
    if (finite) {
      const double area_after = disc.area(next);
      if (std::isfinite(area_after) && area_after <= area_before + kAreaIncreaseTolerance) {
        return {std::move(next), dt, attempt};
      }
    }
    dt *= 0.5;
  }
  throw StepFailure("flow step rejected " + std::to_string(kMaxStepRetries) + " times at t = " + std::to_string(s.time));
}

inline void apply(FlowState& s, detail::AcceptedStep&& step, const FlowDiscretization& disc) {
  s.field.values = std::move(step.values);
  s.time += step.dt;
  s.history.push_back(FlowState::sample(s.field.values, s.time, disc));
}

}  // namespace detail

/// One explicit Euler step of u_t = H_F of size min(s.dt, max_step), with
/// halving on rejection. Throws StepFailure after kMaxStepRetries halvings.
inline FlowState flow_step(FlowState s, const FlowDiscretization& disc,
                           double max_step = std::numeric_limits<double>::infinity()) {
  detail::apply(s, detail::try_step(s, disc, max_step), disc);
  return s;
}

struct StopCriteria {
  double osc_tol = 0.005;
  double hf_tol = 1e-3;
};

enum class FlowVerdict { converged_to_constant, max_time_reached, step_failure };

inline std::string to_string(FlowVerdict v) {
  switch (v) {
    case FlowVerdict::converged_to_constant:
      return "converged_to_constant";
    case FlowVerdict::max_time_reached:
      return "max_time_reached";
    case FlowVerdict::step_failure:
      return "step_failure";
  }
  return "unknown";
}

struct FlowResult {
  FlowState state;
  FlowVerdict verdict = FlowVerdict::max_time_reached;
  std::optional<double> limit_constant;  ///< mean of u on convergence
  int rejected_steps = 0;
  std::string failure_message;
};

inline bool is_converged(const FlowSample& s, const StopCriteria& stop) {
  return s.oscillation <= stop.osc_tol && s.max_abs_hf <= stop.hf_tol;
}

/// Steps until t >= t_max or the state is flat (oscillation <= osc_tol and
/// max |H_F| <= hf_tol). The last step is shortened to land on t_max.
inline FlowResult flow_run(FlowState s0, const FlowDiscretization& disc, double t_max, const StopCriteria& stop) {
  FlowResult r{std::move(s0), FlowVerdict::max_time_reached, std::nullopt, 0, {}};
  // Shifted by the first value so constant fields give their value exactly.
  auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x - v.front();
    return v.front() + acc / static_cast<double>(v.size());
  };
  while (true) {
    if (is_converged(r.state.latest(), stop)) {
      r.verdict = FlowVerdict::converged_to_constant;
      r.limit_constant = mean(r.state.field.values);
      return r;
    }
    const double remaining = t_max - r.state.time;
    if (remaining <= 1e-12 * std::max(1.0, t_max)) {
      r.verdict = FlowVerdict::max_time_reached;
      return r;
    }
    try {
      detail::AcceptedStep step = detail::try_step(r.state, disc, remaining);
      r.rejected_steps += step.retries;
      detail::apply(r.state, std::move(step), disc);
    } catch (const StepFailure& e) {
      r.verdict = FlowVerdict::step_failure;
      r.failure_message = e.what();
      return r;
    }
  }
}

}  // namespace wgeom

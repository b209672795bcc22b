#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wgeom {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1]. Nodes are roots of P_order found by
/// Newton iteration from the usual cosine initial guess.
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = detail::legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = detail::legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

/// Gauss-Legendre rule mapped affinely onto [lo, hi].
inline QuadratureRule gauss_legendre(int order, double lo, double hi) {
  QuadratureRule rule = gauss_legendre(order);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Composite Gauss-Legendre: `panels` equal panels of `order` points each.
inline QuadratureRule composite_gauss_legendre(int order, int panels, double lo, double hi) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  QuadratureRule out;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    QuadratureRule panel = gauss_legendre(order, lo + p * width, lo + (p + 1) * width);
    out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return out;
}

}  // namespace wgeom

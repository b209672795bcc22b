#pragma once

// Gaussian-weighted volumes and areas: ball masses, weighted sphere areas,
// weighted areas of graph caps, and the volume-growth comparison for
// weighted minimal graphs in G^n x R.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"
#include "wgeom/graph_function.hpp"
#include "wgeom/quadrature.hpp"
#include "wgeom/rng.hpp"

namespace wgeom {

struct QuadratureSpec {
  enum class Method { tensor_gauss_legendre, spherical_product, monte_carlo };

  Method method = Method::spherical_product;
  int order = 64;             ///< radial / polar / tensor Gauss-Legendre order
  int azimuthal_order = 128;  ///< trapezoid points on circles
  std::size_t samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;

  static QuadratureSpec tensor(int order = 64) { return {Method::tensor_gauss_legendre, order}; }
  static QuadratureSpec spherical(int order = 64, int azimuthal = 128) {
    return {Method::spherical_product, order, azimuthal};
  }
  static QuadratureSpec monte_carlo(std::size_t samples = 1'000'000, std::uint64_t seed = kDefaultSeed) {
    QuadratureSpec q;
    q.method = Method::monte_carlo;
    q.samples = samples;
    q.seed = seed;
    return q;
  }

  void validate() const {
    if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
    if (azimuthal_order < 2) throw std::invalid_argument("azimuthal order must be >= 2");
    if (method == Method::monte_carlo && samples < 1000) {
      throw std::invalid_argument("Monte Carlo needs at least 1000 samples");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double std_error = 0.0;  ///< zero for deterministic rules
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kMonteCarloBlock = 1 << 16;

// Incomplete gamma --------------------------------------------------------

/// Regularized lower incomplete gamma P(a, x). Series for x < a, Lentz
/// continued fraction for the complement otherwise.
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  constexpr double eps = 1e-16;
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return sum * std::exp(log_prefactor);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

// Closed forms ------------------------------------------------------------

/// C_n = |B^n(0, 1)| = pi^{n/2} / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Normalized Gaussian mass of the centered ball B^n(0, R): P(n/2, R^2/2).
inline double gaussian_ball_volume(int n, double R) {
  if (n < 1) throw std::invalid_argument("gaussian_ball_volume: n must be >= 1");
  if (R < 0.0) throw std::invalid_argument("gaussian_ball_volume: R must be >= 0");
  return regularized_gamma_p(0.5 * n, 0.5 * R * R);
}

/// n e^{-R^2} C_n R^{n-1}: the lateral term exactly as printed in the
/// volume-growth estimate.
inline double printed_lateral_tail(int n, double R) {
  return n * std::exp(-R * R) * unit_ball_volume(n) * std::pow(R, n - 1);
}

/// Wall weight (2 pi)^{-n/2} e^{-R^2/2} times the lateral Euclidean volume
/// n C_n R^n of the cylinder S^{n-1}(0, R) x [0, R].
inline double exact_lateral_tail(int n, double R) {
  return std::pow(kTwoPi, -0.5 * n) * std::exp(-0.5 * R * R) * n * unit_ball_volume(n) * std::pow(R, n);
}

// Integration rules -------------------------------------------------------

struct SphereNode {
  Vector direction;
  double weight;
};

/// Product rule on the unit sphere S^k in R^{k+1}, k in {0, 1, 2}.
inline std::vector<SphereNode> unit_sphere_rule(int k, int polar_order, int azimuthal_order) {
  std::vector<SphereNode> out;
  if (k == 0) {
    out.push_back({make_vector({-1.0}), 1.0});
    out.push_back({make_vector({1.0}), 1.0});
  } else if (k == 1) {
    const double w = kTwoPi / azimuthal_order;
    for (int j = 0; j < azimuthal_order; ++j) {
      const double t = kTwoPi * j / azimuthal_order;
      out.push_back({make_vector({std::cos(t), std::sin(t)}), w});
    }
  } else if (k == 2) {
    const QuadratureRule cos_rule = gauss_legendre(polar_order);
    const double w_az = kTwoPi / azimuthal_order;
    for (std::size_t i = 0; i < cos_rule.nodes.size(); ++i) {
      const double c = cos_rule.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < azimuthal_order; ++j) {
        const double t = kTwoPi * j / azimuthal_order;
        out.push_back({make_vector({s * std::cos(t), s * std::sin(t), c}), cos_rule.weights[i] * w_az});
      }
    }
  } else {
    throw std::invalid_argument("unit_sphere_rule supports S^0, S^1 and S^2 only");
  }
  return out;
}

inline double standard_gaussian_pdf(const Vector& x) {
  return std::pow(kTwoPi, -0.5 * static_cast<double>(x.size())) * std::exp(-0.5 * x.squaredNorm());
}

/// Integral of g against the normalized Gaussian over the centered ball
/// B^n(0, R), n in {1, 2, 3}.
inline QuadratureResult integrate_gaussian_ball(int n, double R, const std::function<double(const Vector&)>& g,
                                                const QuadratureSpec& spec) {
  spec.validate();
  if (n < 1 || n > 3) throw std::invalid_argument("Gaussian ball integration supports 1 <= n <= 3");
  if (R < 0.0) throw std::invalid_argument("radius must be non-negative");
  QuadratureResult result;
  if (R == 0.0) return result;

  switch (spec.method) {
    case QuadratureSpec::Method::spherical_product: {
      const QuadratureRule radial = gauss_legendre(spec.order, 0.0, R);
      const std::vector<SphereNode> dirs = unit_sphere_rule(n - 1, spec.order, spec.azimuthal_order);
      const double norm = std::pow(kTwoPi, -0.5 * n);
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = radial.nodes[i];
        const double radial_weight = radial.weights[i] * std::pow(r, n - 1) * norm * std::exp(-0.5 * r * r);
        for (const auto& d : dirs) result.value += radial_weight * d.weight * g(r * d.direction);
      }
      result.evaluations = radial.nodes.size() * dirs.size();
      return result;
    }
    case QuadratureSpec::Method::tensor_gauss_legendre: {
      // Iterated rule with nested limits: x_k ranges over
      // [-sqrt(R^2 - |x_{<k}|^2), +sqrt(...)].
      const QuadratureRule ref = gauss_legendre(spec.order);
      Vector x(n);
      std::function<void(int, double, double)> recurse = [&](int axis, double remaining_sq, double weight) {
        const double half = std::sqrt(std::max(0.0, remaining_sq));
        for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
          x(axis) = half * ref.nodes[i];
          const double w = weight * half * ref.weights[i];
          if (axis + 1 == n) {
            result.value += w * standard_gaussian_pdf(x) * g(x);
            ++result.evaluations;
          } else {
            recurse(axis + 1, remaining_sq - x(axis) * x(axis), w);
          }
        }
      };
      recurse(0, R * R, 1.0);
      return result;
    }
    case QuadratureSpec::Method::monte_carlo: {
      // Importance sampling from the Gaussian itself: E[g(X) 1{|X| <= R}].
      double sum = 0.0;
      double sum_sq = 0.0;
      const std::size_t blocks = (spec.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
      for (std::size_t b = 0; b < blocks; ++b) {
        CounterRng rng(spec.seed, b);
        const std::size_t count = std::min(kMonteCarloBlock, spec.samples - b * kMonteCarloBlock);
        double block_sum = 0.0;
        double block_sq = 0.0;
        for (std::size_t s = 0; s < count; ++s) {
          const Vector x = rng.normal_vector(n);
          if (x.squaredNorm() > R * R) continue;
          const double v = g(x);
          block_sum += v;
          block_sq += v * v;
        }
        sum += block_sum;
        sum_sq += block_sq;
      }
      const auto N = static_cast<double>(spec.samples);
      result.value = sum / N;
      const double var = std::max(0.0, sum_sq / N - result.value * result.value);
      result.std_error = std::sqrt(var / N);
      result.evaluations = spec.samples;
      return result;
    }
  }
  return result;
}

// Weighted sphere areas ----------------------------------------------------

/// Weighted n-area of S^n(p, R) in R^{n+1} (or its upper half x_{n+1} >= p_{n+1})
/// under e^{-F} for the (n+1)-dimensional density D, p = (0, ..., 0, center_height).
inline QuadratureResult weighted_sphere_area(const Density& D, int n, double R, bool upper_half,
                                             const QuadratureSpec& spec, double center_height = 0.0) {
  spec.validate();
  if (n < 1 || n > 3) throw std::invalid_argument("weighted_sphere_area supports 1 <= n <= 3");
  if (D.dimension() != n + 1) throw std::invalid_argument("density must live on R^{n+1}");
  if (R < 0.0) throw std::invalid_argument("radius must be non-negative");
  QuadratureResult result;
  if (R == 0.0) return result;

  Vector center = Vector::Zero(n + 1);
  center(n) = center_height;

  switch (spec.method) {
    case QuadratureSpec::Method::spherical_product: {
      // Polar angle phi from the x_{n+1} axis; the horizontal slice at phi is
      // a sphere S^{n-1} of radius R sin(phi). Full spheres reuse the mirrored
      // nodes of the upper half.
      const QuadratureRule polar = gauss_legendre(spec.order, 0.0, std::numbers::pi / 2.0);
      const std::vector<SphereNode> dirs = unit_sphere_rule(n - 1, spec.order, spec.azimuthal_order);
      const double scale = std::pow(R, n);
      for (int half = 0; half < (upper_half ? 1 : 2); ++half) {
        const double sign = half == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
          const double phi = polar.nodes[i];
          const double s = std::sin(phi);
          const double w_phi = polar.weights[i] * std::pow(s, n - 1) * scale;
          for (const auto& d : dirs) {
            Vector y(n + 1);
            y.head(n) = R * s * d.direction;
            y(n) = sign * R * std::cos(phi);
            result.value += w_phi * d.weight * D.weight(center + y);
            ++result.evaluations;
          }
        }
      }
      return result;
    }
    case QuadratureSpec::Method::monte_carlo: {
      // Uniform points on S^n from normalized Gaussian vectors.
      const double area = unit_sphere_area(n + 1) * std::pow(R, n) * (upper_half ? 0.5 : 1.0);
      double sum = 0.0;
      double sum_sq = 0.0;
      const std::size_t blocks = (spec.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
      for (std::size_t b = 0; b < blocks; ++b) {
        CounterRng rng(spec.seed, b);
        const std::size_t count = std::min(kMonteCarloBlock, spec.samples - b * kMonteCarloBlock);
        for (std::size_t s = 0; s < count; ++s) {
          Vector y = rng.normal_vector(n + 1);
          y /= y.norm();
          if (upper_half) y(n) = std::abs(y(n));
          const double v = D.weight(center + R * y);
          sum += v;
          sum_sq += v * v;
        }
      }
      const auto N = static_cast<double>(spec.samples);
      const double mean = sum / N;
      result.value = area * mean;
      result.std_error = area * std::sqrt(std::max(0.0, sum_sq / N - mean * mean) / N);
      result.evaluations = spec.samples;
      return result;
    }
    case QuadratureSpec::Method::tensor_gauss_legendre:
      throw std::invalid_argument("weighted_sphere_area: tensor rules do not apply to spheres");
  }
  return result;
}

// Graph caps -------------------------------------------------------------

/// Weighted n-area under the horizontal Gaussian of the part of the graph of
/// u inside the ambient ball B^{n+1}(p, R), with p on the x_{n+1}-axis:
/// integral of e^{-f} W over {x : |x|^2 + (u(x) - p_{n+1})^2 <= R^2}. The
/// indicator is applied at the quadrature nodes.
inline QuadratureResult graph_cap_weighted_area(const GraphFunction& u, const Vector& center, double R,
                                                const QuadratureSpec& spec) {
  const int n = u.dimension();
  if (center.size() != n + 1) throw std::invalid_argument("cap center must live in R^{n+1}");
  if (center.head(n).norm() != 0.0) throw std::invalid_argument("cap center must lie on the x_{n+1}-axis");
  const double height = center(n);
  const double R2 = R * R;
  return integrate_gaussian_ball(
      n, R,
      [&](const Vector& x) {
        const double dz = u.value(x) - height;
        if (x.squaredNorm() + dz * dz > R2) return 0.0;
        return std::sqrt(1.0 + u.gradient(x).squaredNorm());
      },
      spec);
}

/// Cap centered at the axis intersection p = (0, ..., 0, u(0)).
inline QuadratureResult graph_cap_weighted_area(const GraphFunction& u, double R, const QuadratureSpec& spec) {
  Vector p = Vector::Zero(u.dimension() + 1);
  p(u.dimension()) = u.value(Vector::Zero(u.dimension()));
  return graph_cap_weighted_area(u, p, R, spec);
}

struct VolumeBoundReport {
  int n = 0;
  double R = 0.0;
  double lhs = 0.0;  ///< weighted area of the graph cap
  double lhs_std_error = 0.0;
  double ball_term = 0.0;
  double paper_tail = 0.0;
  double exact_tail = 0.0;
  bool chain_ok = false;         ///< lhs <= ball_term + exact_tail + 1e-9
  double hemisphere = 0.0;       ///< weighted area of S^n_+(0, R)
  bool hemisphere_ok = false;    ///< lhs <= hemisphere + 1e-9
};

inline constexpr double kBoundSlack = 1e-9;

/// Evaluates both sides of the volume-growth comparison for a graph the
/// caller asserts is weighted minimal in G^n x R.
inline VolumeBoundReport volume_bound_report(const GraphFunction& u, double R,
                                             const QuadratureSpec& spec = QuadratureSpec::spherical()) {
  const int n = u.dimension();
  VolumeBoundReport r;
  r.n = n;
  r.R = R;
  const QuadratureResult cap = graph_cap_weighted_area(u, R, spec);
  r.lhs = cap.value;
  r.lhs_std_error = cap.std_error;
  r.ball_term = gaussian_ball_volume(n, R);
  r.paper_tail = printed_lateral_tail(n, R);
  r.exact_tail = exact_lateral_tail(n, R);
  r.chain_ok = r.lhs <= r.ball_term + r.exact_tail + kBoundSlack;
  QuadratureSpec sphere_spec = spec;
  if (sphere_spec.method == QuadratureSpec::Method::tensor_gauss_legendre) {
    sphere_spec.method = QuadratureSpec::Method::spherical_product;
  }
  r.hemisphere = weighted_sphere_area(Density::gauss_times_line(n), n, R, true, sphere_spec).value;
  r.hemisphere_ok = r.lhs <= r.hemisphere + kBoundSlack;
  return r;
}

}  // namespace wgeom

#pragma once

// Graph hypersurfaces x_{n+1} = u(x): divergence-form curvature with the
// upward normal (-grad u, 1)/W, weighted minimality, the classification of
// weighted-minimal hyperplanes in G^n x (R, e^{-h}), and the weighted area
// functional over the Gaussian base.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"
#include "wgeom/graph_function.hpp"
#include "wgeom/measure.hpp"
#include "wgeom/surface.hpp"

namespace wgeom {

/// Area element W = sqrt(1 + |grad u|^2).
inline double graph_slope(const GraphFunction& u, const Vector& x) {
  return std::sqrt(1.0 + u.gradient(x).squaredNorm());
}

inline Vector upward_normal(const GraphFunction& u, const Vector& x) {
  const Vector g = u.gradient(x);
  const auto n = g.size();
  Vector N(n + 1);
  N.head(n) = -g;
  N(n) = 1.0;
  return N / std::sqrt(1.0 + g.squaredNorm());
}

/// H = div(grad u / W) = (W^2 tr(D^2 u) - grad u^T D^2 u grad u) / W^3.
inline double graph_mean_curvature(const GraphFunction& u, const Vector& x) {
  const Vector g = u.gradient(x);
  const Matrix hess = u.hessian(x);
  const double W2 = 1.0 + g.squaredNorm();
  return (W2 * hess.trace() - g.dot(hess * g)) / (W2 * std::sqrt(W2));
}

inline CurvatureReport graph_weighted_mean_curvature(const GraphFunction& u, const Density& D, const Vector& x) {
  const int n = u.dimension();
  if (D.dimension() != n + 1) throw std::invalid_argument("density must live on R^{n+1}");
  CurvatureReport r;
  r.chart_point = x;
  r.ambient_point.resize(n + 1);
  r.ambient_point.head(n) = x;
  r.ambient_point(n) = u.value(x);
  r.unit_normal = upward_normal(u, x);
  r.mean_curvature = graph_mean_curvature(u, x);
  r.density_term = D.grad_log_weight(r.ambient_point).dot(r.unit_normal);
  r.weighted_mean_curvature = r.mean_curvature + r.density_term;
  return r;
}

/// The graph chart x -> (x, u(x)) over the box [-half_width, half_width]^n,
/// with analytic first and second derivatives.
inline ParametricSurface as_parametric(const GraphFunction& u, double half_width = 4.0) {
  const int n = u.dimension();
  ChartBox box{Vector::Constant(n, -half_width), Vector::Constant(n, half_width)};
  return ParametricSurface(
      n, std::move(box),
      [u, n](const Vector& x) {
        Vector X(n + 1);
        X.head(n) = x;
        X(n) = u.value(x);
        return X;
      },
      JacobianMap([u, n](const Vector& x) {
        Matrix J = Matrix::Zero(n + 1, n);
        J.topRows(n) = Matrix::Identity(n, n);
        J.row(n) = u.gradient(x).transpose();
        return J;
      }),
      HessianMap([u, n](const Vector& x) {
        std::vector<Matrix> H(static_cast<std::size_t>(n + 1), Matrix::Zero(n, n));
        H[static_cast<std::size_t>(n)] = u.hessian(x);
        return H;
      }));
}

// Hyperplane classification -----------------------------------------------

enum class PlaneClass { minimal_horizontal, minimal_tilted, not_minimal };

inline std::string to_string(PlaneClass c) {
  switch (c) {
    case PlaneClass::minimal_horizontal:
      return "minimal_horizontal";
    case PlaneClass::minimal_tilted:
      return "minimal_tilted";
    case PlaneClass::not_minimal:
      return "not_minimal";
  }
  return "unknown";
}

inline constexpr double kPlaneResidualTolerance = 1e-9;

/// Classifies the hyperplane <a, x> + x_{n+1} + c = 0 in G^n x (R, e^{-h}).
/// The plane is weighted minimal iff <a, x> + h'(x_{n+1}) vanishes on it;
/// on the plane <a, x> = -x_{n+1} - c, so the test reduces to h'(z) = z + c
/// over the heights the plane attains (one height when a = 0, all of them
/// otherwise).
inline PlaneClass hyperplane_minimality(const Vector& a, double c, const Profile& h) {
  const double a_norm = a.norm();
  if (a_norm == 0.0) {
    const double z = -c;
    if (!h.contains(z)) return PlaneClass::not_minimal;
    return std::abs(h.derivative(z)) <= kPlaneResidualTolerance ? PlaneClass::minimal_horizontal
                                                                : PlaneClass::not_minimal;
  }
  // Walk along the plane in the direction of a; every height is attained.
  double worst = 0.0;
  const double lo = std::max(-c - 5.0, std::isfinite(h.lower_bound()) ? h.lower_bound() + 1e-3 : -c - 5.0);
  const double hi = std::max(lo + 1.0, -c + 5.0);
  constexpr int samples = 101;
  for (int k = 0; k < samples; ++k) {
    const double z = lo + (hi - lo) * k / (samples - 1);
    const Vector x = (-z - c) / (a_norm * a_norm) * a;
    const double residual = a.dot(x) + h.derivative(z);
    worst = std::max(worst, std::abs(residual) / (1.0 + std::abs(z) + std::abs(c)));
  }
  return worst <= kPlaneResidualTolerance ? PlaneClass::minimal_tilted : PlaneClass::not_minimal;
}

/// General form <a, x> + b x_{n+1} + c = 0 with b != 0.
inline PlaneClass hyperplane_minimality(const Vector& a, double b, double c, const Profile& h) {
  if (b == 0.0) throw std::invalid_argument("vertical hyperplanes are not graphs");
  return hyperplane_minimality(Vector(a / b), c / b, h);
}

struct PlaneRoots {
  std::vector<double> roots;
  bool identically_zero = false;
};

inline constexpr int kRootScanIntervals = 10000;
inline constexpr double kRootTolerance = 1e-12;

/// Heights a in [lo, hi] where h'(a) = 0, i.e. the weighted-minimal
/// horizontal planes x_{n+1} = a. Uniform sign-change scan followed by
/// bisection.
inline PlaneRoots horizontal_plane_roots(const Profile& h, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("root interval must satisfy lo < hi");
  if (!h.contains(lo) || !h.contains(hi)) {
    throw DomainError("root interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] leaves the domain of profile '" + h.name() + "'");
  }
  PlaneRoots out;
  const double step = (hi - lo) / kRootScanIntervals;
  std::vector<double> xs(kRootScanIntervals + 1);
  std::vector<double> ds(kRootScanIntervals + 1);
  bool all_zero = true;
  for (int k = 0; k <= kRootScanIntervals; ++k) {
    xs[static_cast<std::size_t>(k)] = k == kRootScanIntervals ? hi : lo + k * step;
    ds[static_cast<std::size_t>(k)] = h.derivative(xs[static_cast<std::size_t>(k)]);
    if (std::abs(ds[static_cast<std::size_t>(k)]) > 1e-15) all_zero = false;
  }
  if (all_zero) {
    out.identically_zero = true;
    return out;
  }
  auto push = [&](double r) {
    if (out.roots.empty() || std::abs(r - out.roots.back()) > 1e-9) out.roots.push_back(r);
  };
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    double a = xs[k];
    double b = xs[k + 1];
    double fa = ds[k];
    const double fb = ds[k + 1];
    if (fa == 0.0) {
      push(a);
      continue;
    }
    if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
    while (b - a > kRootTolerance) {
      const double mid = 0.5 * (a + b);
      const double fm = h.derivative(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    push(0.5 * (a + b));
  }
  if (ds.back() == 0.0) push(xs.back());
  return out;
}

// Weighted area functional --------------------------------------------------

inline constexpr double kDefaultTruncationRadius = 8.0;

/// Weighted area of the graph over B^n(0, R) in the normalized Gauss space:
/// integral of (2 pi)^{-n/2} e^{-|x|^2/2} sqrt(1 + |grad u|^2) dx. It is at
/// least the Gaussian mass of the ball, with equality iff grad u vanishes.
inline double bernstein_functional(const GraphFunction& u, double R = kDefaultTruncationRadius,
                                   const QuadratureSpec& quad = QuadratureSpec::spherical()) {
  return integrate_gaussian_ball(
             u.dimension(), R, [&](const Vector& x) { return graph_slope(u, x); }, quad)
      .value;
}

}  // namespace wgeom

#pragma once

// Pointwise checks of the calibration argument for graphs.
//
// The unit upward normal N of a graph, translated vertically, is a unit
// vector field Nbar on R^{n+1}. The n-form w(X_1..X_n) = det(X_1..X_n, Nbar)
// has comass 1, and d(e^{-F} w) = div(e^{-F} Nbar) dV. With the upward
// normal and H = div(grad u / W) one has div Nbar = -H, hence
//     div(e^{-F} Nbar) = -e^{-F} (H + <grad F, Nbar>) = -e^{-F} H_F,
// so the weighted form is closed exactly where the graph is weighted minimal.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"
#include "wgeom/graph.hpp"
#include "wgeom/graph_function.hpp"
#include "wgeom/rng.hpp"

namespace wgeom {

/// Nbar(x, z) = N(x): the graph normal extended by vertical translation.
class ExtendedNormalField {
 public:
  explicit ExtendedNormalField(GraphFunction u) : u_(std::move(u)) {}

  int ambient_dimension() const { return u_.dimension() + 1; }
  const GraphFunction& graph() const { return u_; }

  Vector operator()(const Vector& y) const {
    if (y.size() != ambient_dimension()) throw std::invalid_argument("ambient point has wrong dimension");
    return upward_normal(u_, y.head(u_.dimension()));
  }

 private:
  GraphFunction u_;
};

/// det(X_1, ..., X_n, Nbar(y)) for the frame stored in the columns of `frame`.
inline double calibration_value(const ExtendedNormalField& field, const Vector& y, const Matrix& frame) {
  const auto m = field.ambient_dimension();
  if (frame.rows() != m || frame.cols() != m - 1) throw std::invalid_argument("frame must be (n+1) x n");
  Matrix M(m, m);
  M.leftCols(m - 1) = frame;
  M.col(m - 1) = field(y);
  return M.determinant();
}

/// Orthonormal n-frame spanning the graph's tangent space above x, oriented
/// so that det(frame, N) = +1.
inline Matrix tangent_frame(const GraphFunction& u, const Vector& x) {
  const int n = u.dimension();
  Matrix J = Matrix::Zero(n + 1, n);
  J.topRows(n) = Matrix::Identity(n, n);
  J.row(n) = u.gradient(x).transpose();
  Eigen::HouseholderQR<Matrix> qr(J);
  Matrix frame = qr.householderQ() * Matrix::Identity(n + 1, n);
  Matrix M(n + 1, n + 1);
  M.leftCols(n) = frame;
  M.col(n) = upward_normal(u, x);
  if (M.determinant() < 0.0) frame.col(0) = -frame.col(0);
  return frame;
}

/// Gram-Schmidt (via QR) on n standard-normal vectors in R^{n+1}.
inline Matrix random_orthonormal_frame(CounterRng& rng, int n) {
  Matrix G(n + 1, n);
  for (int j = 0; j < n; ++j) G.col(j) = rng.normal_vector(n + 1);
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(n + 1, n);
}

struct ComassResult {
  double max_abs = 0.0;
  int trials = 0;
};

inline constexpr double kComassSlack = 1e-12;

/// Max of |w(X_1..X_n)| over `trials` random ambient points (standard normal
/// in x, uniform in [-3, 3] vertically) and random orthonormal frames.
inline ComassResult comass_check(const GraphFunction& u, int trials, std::uint64_t seed = kDefaultSeed) {
  if (trials < 1) throw std::invalid_argument("comass_check needs at least one trial");
  const ExtendedNormalField field(u);
  const int n = u.dimension();
  ComassResult out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    Vector y(n + 1);
    y.head(n) = rng.normal_vector(n);
    y(n) = rng.uniform(-3.0, 3.0);
    const Matrix frame = random_orthonormal_frame(rng, n);
    out.max_abs = std::max(out.max_abs, std::abs(calibration_value(field, y, frame)));
  }
  return out;
}

inline constexpr double kDivergenceStep = 1e-4;

struct ClosednessReport {
  double divergence = 0.0;        ///< div(e^{-F} Nbar)(y), central differences
  double weighted_curvature = 0.0;///< H_F of the vertical translate of the graph through y
  double weight = 0.0;            ///< e^{-F(y)}
  double residual = 0.0;          ///< divergence + weight * weighted_curvature
};

/// Checks div(e^{-F} Nbar) = -e^{-F} H_F at the ambient point y. H_F is the
/// weighted mean curvature of the translate of the graph passing through y;
/// for densities independent of x_{n+1} this is H_F at the graph point below
/// or above y, and for points on the graph it is H_F there for any density.
inline ClosednessReport closedness_residual(const GraphFunction& u, const Density& D, const Vector& y) {
  const int n = u.dimension();
  if (y.size() != n + 1 || D.dimension() != n + 1) throw std::invalid_argument("dimension mismatch");
  const ExtendedNormalField field(u);
  const double h = kDivergenceStep;
  double div = 0.0;
  for (int k = 0; k <= n; ++k) {
    Vector a = y;
    Vector b = y;
    a(k) += h;
    b(k) -= h;
    div += (D.weight(a) * field(a)(k) - D.weight(b) * field(b)(k)) / (2.0 * h);
  }
  ClosednessReport r;
  r.divergence = div;
  r.weight = D.weight(y);
  const Vector x = y.head(n);
  r.weighted_curvature = graph_mean_curvature(u, x) + D.grad_log_weight(y).dot(field(y));
  r.residual = r.divergence + r.weight * r.weighted_curvature;
  return r;
}

}  // namespace wgeom

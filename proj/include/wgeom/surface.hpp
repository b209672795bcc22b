#pragma once

// Parametric hypersurfaces X: chart in R^n -> R^{n+1}.
//
// Conventions used throughout the library:
//  * The unit normal is the generalized cross product of the chart partials,
//    i.e. the vector N with <N, v> = det(X_1, ..., X_n, v), normalized. For
//    n = 2 this is X_u x X_v; for a graph chart it is the upward normal.
//  * The shape operator is S = -dN and H = trace S is the SUM of the
//    principal curvatures. A cylinder of radius r with outward normal has
//    H = -1/r; a graph with upward normal has H = div(grad u / W).
//  * The weighted mean curvature is H_F = H + <grad F, N>.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"

namespace wgeom {

using ChartMap = std::function<Vector(const Vector&)>;
/// (n+1) x n matrix whose columns are the chart partials.
using JacobianMap = std::function<Matrix(const Vector&)>;
/// n+1 symmetric n x n matrices: the Hessian of each ambient coordinate.
using HessianMap = std::function<std::vector<Matrix>(const Vector&)>;

struct ChartBox {
  Vector lower;
  Vector upper;

  bool contains(const Vector& p) const {
    return p.size() == lower.size() && (p.array() >= lower.array()).all() && (p.array() <= upper.array()).all();
  }
};

struct CurvatureReport {
  Vector chart_point;
  Vector ambient_point;
  Vector unit_normal;
  double mean_curvature = 0.0;
  double density_term = 0.0;
  double weighted_mean_curvature = 0.0;
};

class ParametricSurface {
 public:
  ParametricSurface(int chart_dimension, ChartBox domain, ChartMap immersion,
                    std::optional<JacobianMap> jacobian = std::nullopt,
                    std::optional<HessianMap> hessians = std::nullopt)
      : n_(chart_dimension),
        domain_(std::move(domain)),
        immersion_(std::move(immersion)),
        jacobian_(std::move(jacobian)),
        hessians_(std::move(hessians)) {
    if (n_ < 1) throw std::invalid_argument("chart dimension must be positive");
    if (domain_.lower.size() != n_ || domain_.upper.size() != n_) {
      throw std::invalid_argument("chart box dimension mismatch");
    }
  }

  int chart_dimension() const { return n_; }
  int ambient_dimension() const { return n_ + 1; }
  const ChartBox& domain() const { return domain_; }
  bool has_analytic_jacobian() const { return jacobian_.has_value(); }
  bool has_analytic_hessians() const { return hessians_.has_value(); }

  Vector point(const Vector& p) const { return immersion_(p); }

  Matrix jacobian(const Vector& p) const {
    if (jacobian_) return (*jacobian_)(p);
    return fd_jacobian(p);
  }

  /// Central differences with step kGradientStep, regardless of analytic providers.
  Matrix fd_jacobian(const Vector& p) const {
    Matrix J(n_ + 1, n_);
    for (int i = 0; i < n_; ++i) {
      Vector a = p;
      Vector b = p;
      a(i) += kGradientStep;
      b(i) -= kGradientStep;
      J.col(i) = (immersion_(a) - immersion_(b)) / (2.0 * kGradientStep);
    }
    return J;
  }

  std::vector<Matrix> hessians(const Vector& p) const {
    if (hessians_) return (*hessians_)(p);
    return fd_hessians(p);
  }

  /// Second partials by central differences with step kHessianStep.
  std::vector<Matrix> fd_hessians(const Vector& p) const {
    const double h = kHessianStep;
    std::vector<Matrix> out(static_cast<std::size_t>(n_ + 1), Matrix::Zero(n_, n_));
    const Vector center = immersion_(p);
    auto shifted = [&](int i, double si, int j, double sj) {
      Vector q = p;
      q(i) += si;
      q(j) += sj;
      return immersion_(q);
    };
    for (int i = 0; i < n_; ++i) {
      const Vector second = (shifted(i, h, i, 0.0) - 2.0 * center + shifted(i, -h, i, 0.0)) / (h * h);
      for (int k = 0; k <= n_; ++k) out[static_cast<std::size_t>(k)](i, i) = second(k);
      for (int j = i + 1; j < n_; ++j) {
        const Vector mixed =
            (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) + shifted(i, -h, j, -h)) / (4.0 * h * h);
        for (int k = 0; k <= n_; ++k) {
          out[static_cast<std::size_t>(k)](i, j) = mixed(k);
          out[static_cast<std::size_t>(k)](j, i) = mixed(k);
        }
      }
    }
    return out;
  }

 private:
  int n_;
  ChartBox domain_;
  ChartMap immersion_;
  std::optional<JacobianMap> jacobian_;
  std::optional<HessianMap> hessians_;
};

inline constexpr double kMinGramDeterminant = 1e-12;

/// The vector N with <N, v> = det(J | v) for every v (unnormalized).
inline Vector generalized_cross(const Matrix& J) {
  const auto m = J.rows();
  Vector N(m);
  Matrix M(m, m);
  M.leftCols(m - 1) = J;
  for (Eigen::Index k = 0; k < m; ++k) {
    M.col(m - 1).setZero();
    M(k, m - 1) = 1.0;
    N(k) = M.determinant();
  }
  return N;
}

inline void require_immersion(const Matrix& J) {
  const double gram = (J.transpose() * J).determinant();
  if (!(gram > kMinGramDeterminant)) {
    throw RankDeficiencyError("chart partials are linearly dependent (Gram determinant " + std::to_string(gram) + ")");
  }
}

inline Vector unit_normal(const ParametricSurface& S, const Vector& p) {
  const Matrix J = S.jacobian(p);
  require_immersion(J);
  const Vector N = generalized_cross(J);
  return N / N.norm();
}

namespace detail {

// Mean curvature from the first and second fundamental forms g, b:
// H = trace(g^{-1} b), b_ij = <X_ij, N>.
inline double mean_curvature_from(const Matrix& J, const std::vector<Matrix>& hess, const Vector& normal) {
  const auto n = J.cols();
  const Matrix g = J.transpose() * J;
  Matrix b = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < hess.size(); ++k) b += normal(static_cast<Eigen::Index>(k)) * hess[k];
  return g.ldlt().solve(b).trace();
}

}  // namespace detail

inline double mean_curvature(const ParametricSurface& S, const Vector& p) {
  const Matrix J = S.jacobian(p);
  require_immersion(J);
  const Vector N = generalized_cross(J).normalized();
  return detail::mean_curvature_from(J, S.hessians(p), N);
}

inline CurvatureReport weighted_mean_curvature(const ParametricSurface& S, const Density& D, const Vector& p) {
  if (D.dimension() != S.ambient_dimension()) {
    throw std::invalid_argument("density dimension must equal the ambient dimension of the surface");
  }
  const Matrix J = S.jacobian(p);
  require_immersion(J);
  CurvatureReport r;
  r.chart_point = p;
  r.ambient_point = S.point(p);
  r.unit_normal = generalized_cross(J).normalized();
  r.mean_curvature = detail::mean_curvature_from(J, S.hessians(p), r.unit_normal);
  r.density_term = D.grad_log_weight(r.ambient_point).dot(r.unit_normal);
  r.weighted_mean_curvature = r.mean_curvature + r.density_term;
  return r;
}

/// <grad F, N> alone, with the cross-product orientation of the chart.
inline double density_normal_pairing(const ParametricSurface& S, const Density& D, const Vector& p) {
  return D.grad_log_weight(S.point(p)).dot(unit_normal(S, p));
}

struct TangentPlaneDistance {
  double lhs = 0.0;  ///< distance from the axis projection of M to T_M S
  double rhs = 0.0;  ///< |<grad f, n>| with grad f = (x_1, ..., x_n, 0)
};

/// Compares the distance from rho(M) = (0, ..., 0, x_{n+1}(M)) to the affine
/// tangent hyperplane at M with |<grad f, n>| for the horizontal Gaussian.
/// The distance is computed by least-squares projection onto span(J), so it
/// does not use the normal vector.
inline TangentPlaneDistance tangent_plane_distance(const ParametricSurface& S, const Vector& p) {
  const Matrix J = S.jacobian(p);
  require_immersion(J);
  const Vector M = S.point(p);
  const auto m = M.size();
  Vector rho = Vector::Zero(m);
  rho(m - 1) = M(m - 1);

  const Vector offset = rho - M;
  const Vector coeffs = (J.transpose() * J).ldlt().solve(J.transpose() * offset);
  const Vector residual = offset - J * coeffs;

  Vector grad_f = M;
  grad_f(m - 1) = 0.0;
  const Vector N = generalized_cross(J).normalized();
  return {residual.norm(), std::abs(grad_f.dot(N))};
}

}  // namespace wgeom

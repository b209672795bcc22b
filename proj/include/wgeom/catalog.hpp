#pragma once

// The classical example surfaces in G^2 x R, each paired with the property
// claimed for it, and a sampler that checks every claim.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/density.hpp"
#include "wgeom/graph.hpp"
#include "wgeom/graph_function.hpp"
#include "wgeom/surface.hpp"

namespace wgeom {

struct Claim {
  enum class Kind { weighted_minimal, constant_weighted_curvature, constant_density_term };
  Kind kind = Kind::weighted_minimal;
  double value = 0.0;

  static Claim weighted_minimal() { return {Kind::weighted_minimal, 0.0}; }
  static Claim constant_weighted_curvature(double v) { return {Kind::constant_weighted_curvature, v}; }
  static Claim constant_density_term(double v) { return {Kind::constant_density_term, v}; }

  std::string describe() const {
    switch (kind) {
      case Kind::weighted_minimal:
        return "weighted_minimal";
      case Kind::constant_weighted_curvature:
        return "constant_H_F(" + std::to_string(value) + ")";
      case Kind::constant_density_term:
        return "constant_density_term(" + std::to_string(value) + ")";
    }
    return "unknown";
  }
};

struct CatalogEntry {
  std::string name;
  std::variant<ParametricSurface, GraphFunction> surface;
  Density density;
  Claim claim;
  std::string source;
  ChartBox sample_domain;   ///< where the claim is sampled
  std::string annotation;   ///< known discrepancies, if any
};

// Surfaces ------------------------------------------------------------------

inline constexpr double kDefaultVMax = 2.0;

/// The associate family X_theta of the helicoid (theta = 0) and the catenoid
/// (theta = pi/2), chart (u, v) in [-pi, pi] x [-v_max, v_max]:
///   x = cos(t) sinh(v) sin(u) + sin(t) cosh(v) cos(u)
///   y = -cos(t) sinh(v) cos(u) + sin(t) cosh(v) sin(u)
///   z = u cos(t) + v sin(t)
/// Every member is minimal. The cross-product normal is
/// (cos u, sin u, -sinh v) / cosh v, for which <(x, y, 0), N> = sin(theta).
inline ParametricSurface make_X_theta(double theta, double v_max = kDefaultVMax) {
  if (!(theta > -std::numbers::pi && theta <= std::numbers::pi)) {
    throw std::invalid_argument("theta must lie in (-pi, pi]");
  }
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  ChartBox box{make_vector({-std::numbers::pi, -v_max}), make_vector({std::numbers::pi, v_max})};
  auto immersion = [ct, st](const Vector& p) {
    const double u = p(0), v = p(1);
    const double sh = std::sinh(v), ch = std::cosh(v), su = std::sin(u), cu = std::cos(u);
    return make_vector({ct * sh * su + st * ch * cu, -ct * sh * cu + st * ch * su, u * ct + v * st});
  };
  auto jacobian = [ct, st](const Vector& p) {
    const double u = p(0), v = p(1);
    const double sh = std::sinh(v), ch = std::cosh(v), su = std::sin(u), cu = std::cos(u);
    Matrix J(3, 2);
    J << ct * sh * cu - st * ch * su, ct * ch * su + st * sh * cu,  //
        ct * sh * su + st * ch * cu, -ct * ch * cu + st * sh * su,  //
        ct, st;
    return J;
  };
  auto hessians = [ct, st](const Vector& p) {
    const double u = p(0), v = p(1);
    const double sh = std::sinh(v), ch = std::cosh(v), su = std::sin(u), cu = std::cos(u);
    const double x = ct * sh * su + st * ch * cu;
    const double y = -ct * sh * cu + st * ch * su;
    Matrix Hx(2, 2), Hy(2, 2);
    const double x_uv = ct * ch * cu - st * sh * su;
    const double y_uv = ct * ch * su + st * sh * cu;
    Hx << -x, x_uv, x_uv, x;
    Hy << -y, y_uv, y_uv, y;
    return std::vector<Matrix>{Hx, Hy, Matrix::Zero(2, 2)};
  };
  return ParametricSurface(2, std::move(box), immersion, JacobianMap(jacobian), HessianMap(hessians));
}

/// Closed-form unit normal of X_theta, independent of theta.
inline Vector x_theta_normal(double u, double v) {
  const double ch = std::cosh(v);
  return make_vector({std::cos(u) / ch, std::sin(u) / ch, -std::sinh(v) / ch});
}

/// Cylinder of radius r about the x_3-axis, chart (angle, height), outward normal.
inline ParametricSurface cylinder_chart(double r, double half_height = 2.0) {
  if (!(r > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
  ChartBox box{make_vector({-std::numbers::pi, -half_height}), make_vector({std::numbers::pi, half_height})};
  return ParametricSurface(
      2, std::move(box),
      [r](const Vector& p) { return make_vector({r * std::cos(p(0)), r * std::sin(p(0)), p(1)}); },
      JacobianMap([r](const Vector& p) {
        Matrix J(3, 2);
        J << -r * std::sin(p(0)), 0.0, r * std::cos(p(0)), 0.0, 0.0, 1.0;
        return J;
      }),
      HessianMap([r](const Vector& p) {
        Matrix Hx = Matrix::Zero(2, 2), Hy = Matrix::Zero(2, 2);
        Hx(0, 0) = -r * std::cos(p(0));
        Hy(0, 0) = -r * std::sin(p(0));
        return std::vector<Matrix>{Hx, Hy, Matrix::Zero(2, 2)};
      }));
}

/// Round sphere of radius r about the origin, chart (polar angle, azimuth)
/// away from the poles, outward normal.
inline ParametricSurface sphere_chart(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  ChartBox box{make_vector({0.05, -std::numbers::pi}), make_vector({std::numbers::pi - 0.05, std::numbers::pi})};
  return ParametricSurface(
      2, std::move(box),
      [r](const Vector& p) {
        return make_vector({r * std::sin(p(0)) * std::cos(p(1)), r * std::sin(p(0)) * std::sin(p(1)), r * std::cos(p(0))});
      },
      JacobianMap([r](const Vector& p) {
        const double st = std::sin(p(0)), ct = std::cos(p(0)), sp = std::sin(p(1)), cp = std::cos(p(1));
        Matrix J(3, 2);
        J << r * ct * cp, -r * st * sp, r * ct * sp, r * st * cp, -r * st, 0.0;
        return J;
      }),
      HessianMap([r](const Vector& p) {
        const double st = std::sin(p(0)), ct = std::cos(p(0)), sp = std::sin(p(1)), cp = std::cos(p(1));
        Matrix Hx(2, 2), Hy(2, 2), Hz(2, 2);
        Hx << -r * st * cp, -r * ct * sp, -r * ct * sp, -r * st * cp;
        Hy << -r * st * sp, r * ct * cp, r * ct * cp, -r * st * sp;
        Hz << -r * ct, 0.0, 0.0, 0.0;
        return std::vector<Matrix>{Hx, Hy, Hz};
      }));
}

/// Flat chart of the plane {<normal, y> = offset} in R^3. The chart is
/// oriented so that the cross-product normal equals normal / |normal|.
inline ParametricSurface plane_chart(const Vector& normal, double offset, double half_width = 3.0) {
  if (normal.size() != 3 || normal.norm() == 0.0) throw std::invalid_argument("plane normal must be a nonzero 3-vector");
  const Vector nu = normal.normalized();
  // Orthonormal e1, e2 with e1 x e2 = nu.
  const Vector helper = std::abs(nu(2)) < 0.9 ? make_vector({0.0, 0.0, 1.0}) : make_vector({1.0, 0.0, 0.0});
  Eigen::Vector3d n3 = nu;
  Eigen::Vector3d e1 = helper.head<3>().cross(n3).normalized();
  Eigen::Vector3d e2 = n3.cross(e1);
  const Vector base = (offset / normal.norm()) * nu;
  ChartBox box{Vector::Constant(2, -half_width), Vector::Constant(2, half_width)};
  const Vector E1 = e1;
  const Vector E2 = e2;
  return ParametricSurface(
      2, std::move(box), [base, E1, E2](const Vector& p) { return Vector(base + p(0) * E1 + p(1) * E2); },
      JacobianMap([E1, E2](const Vector&) {
        Matrix J(3, 2);
        J.col(0) = E1;
        J.col(1) = E2;
        return J;
      }),
      HessianMap([](const Vector&) { return std::vector<Matrix>(3, Matrix::Zero(2, 2)); }));
}

// Entries -------------------------------------------------------------------

inline CatalogEntry make_cylinder(double r) {
  ParametricSurface S = cylinder_chart(r);
  ChartBox box = S.domain();
  const double hf = r - 1.0 / r;
  return {"cylinder_r" + std::to_string(r), std::move(S), Density::gauss_times_line(2),
          hf == 0.0 ? Claim::weighted_minimal() : Claim::constant_weighted_curvature(hf),
          "right circular cylinder about the vertical axis", std::move(box), {}};
}

/// Planes parallel to the vertical axis (horizontal normal): H_F equals the
/// distance to the axis, zero when the plane contains it.
inline CatalogEntry make_plane(const Vector& normal, double offset) {
  if (normal.size() != 3 || normal.head(2).norm() == 0.0 || normal(2) != 0.0) {
    throw std::invalid_argument("make_plane catalogues vertical planes only; use make_horizontal_plane");
  }
  ParametricSurface S = plane_chart(normal, offset);
  ChartBox box = S.domain();
  const double distance = offset / normal.norm();
  const bool through_axis = distance == 0.0;
  return {through_axis ? "plane_through_axis" : "plane_parallel_to_axis", std::move(S), Density::gauss_times_line(2),
          through_axis ? Claim::weighted_minimal() : Claim::constant_weighted_curvature(distance),
          through_axis ? "plane containing the vertical axis" : "plane parallel to the vertical axis", std::move(box),
          {}};
}

inline CatalogEntry make_horizontal_plane(double a, const Density& density = Density::gauss_times_line(2)) {
  ParametricSurface S = plane_chart(make_vector({0.0, 0.0, 1.0}), a);
  ChartBox box = S.domain();
  return {"horizontal_plane(" + std::to_string(a) + ", " + density.name() + ")", std::move(S), density,
          Claim::weighted_minimal(), "horizontal plane z = a", std::move(box), {}};
}

/// z = x^2 over G^2 with the vertical profile h(z) = z^2 - ln sqrt(1 + 4z).
inline CatalogEntry make_parabola_with_profile() {
  return {"parabola_with_profile",
          GraphFunction::parabola(2),
          Density::product(Density::gaussian(2), Profile::paper_example()),
          Claim::weighted_minimal(),
          "graph z = x^2 with vertical weight e^{-h}, h(z) = z^2 - ln sqrt(1+4z)",
          ChartBox{Vector::Constant(2, -3.0), Vector::Constant(2, 3.0)},
          {}};
}

inline CatalogEntry make_x_theta_entry(double theta) {
  ParametricSurface S = make_X_theta(theta);
  ChartBox box = S.domain();
  std::string name;
  Claim claim;
  if (theta == 0.0) {
    name = "helicoid";
    claim = Claim::weighted_minimal();
  } else if (theta == std::numbers::pi / 2.0) {
    name = "catenoid";
    claim = Claim::constant_weighted_curvature(1.0);
  } else {
    name = "x_theta(" + std::to_string(theta) + ")";
    claim = Claim::constant_density_term(std::sin(theta));
  }
  return {name,
          std::move(S),
          Density::gauss_times_line(2),
          claim,
          "associate family X_theta of the helicoid and catenoid",
          std::move(box),
          "normal third component is -sinh(v)/cosh(v); the variant -sinh(u)/cosh(v) is not orthogonal to X_u"};
}

/// Every catalogued example, each exactly once.
inline std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> entries;
  entries.push_back(make_plane(make_vector({std::cos(0.5), std::sin(0.5), 0.0}), 0.0));
  entries.push_back(make_plane(make_vector({std::cos(0.5), std::sin(0.5), 0.0}), 0.75));
  entries.push_back(make_horizontal_plane(0.7));
  entries.push_back(make_cylinder(1.0));
  entries.push_back(make_cylinder(2.0));
  entries.push_back(make_x_theta_entry(0.0));
  entries.push_back(make_x_theta_entry(std::numbers::pi / 4.0));
  entries.push_back(make_x_theta_entry(std::numbers::pi / 2.0));
  entries.push_back(make_parabola_with_profile());
  const Profile h = Profile::paper_example();
  const PlaneRoots roots = horizontal_plane_roots(h, 0.0, 2.0);
  for (double a : roots.roots) entries.push_back(make_horizontal_plane(a, Density::product(Density::gaussian(2), h)));
  return entries;
}

// Verification --------------------------------------------------------------

struct EntryResult {
  std::string name;
  std::string claim;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string source;
};

struct CatalogReport {
  std::vector<EntryResult> entries;
  bool pass = true;
};

inline constexpr int kCatalogSamplesPerAxis = 20;

/// Samples on a uniform grid over the box, `per_axis` points per coordinate.
inline std::vector<Vector> grid_samples(const ChartBox& box, int per_axis) {
  const auto n = box.lower.size();
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector p(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double t = per_axis == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(k)]) / (per_axis - 1);
      p(k) = box.lower(k) + t * (box.upper(k) - box.lower(k));
    }
    out.push_back(std::move(p));
    Eigen::Index k = 0;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == per_axis) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

/// Worst-case deviation from the claim over the samples. The orientation of
/// a chart is a global choice, so the residual is minimized over the sign.
inline double claim_residual(const CatalogEntry& e, int per_axis = kCatalogSamplesPerAxis) {
  std::vector<CurvatureReport> reports;
  for (const Vector& p : grid_samples(e.sample_domain, per_axis)) {
    if (const auto* S = std::get_if<ParametricSurface>(&e.surface)) {
      reports.push_back(weighted_mean_curvature(*S, e.density, p));
    } else {
      reports.push_back(graph_weighted_mean_curvature(std::get<GraphFunction>(e.surface), e.density, p));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    double worst = 0.0;
    for (const auto& r : reports) {
      switch (e.claim.kind) {
        case Claim::Kind::weighted_minimal:
          worst = std::max(worst, std::abs(r.weighted_mean_curvature));
          break;
        case Claim::Kind::constant_weighted_curvature:
          worst = std::max(worst, std::abs(sign * r.weighted_mean_curvature - e.claim.value));
          break;
        case Claim::Kind::constant_density_term:
          worst = std::max({worst, std::abs(sign * r.density_term - e.claim.value), std::abs(r.mean_curvature)});
          break;
      }
    }
    best = std::min(best, worst);
  }
  return best;
}

inline CatalogReport verify_catalog(const std::vector<CatalogEntry>& entries, double tolerance) {
  CatalogReport report;
  for (const auto& e : entries) {
    EntryResult r{e.name, e.claim.describe(), claim_residual(e), tolerance, false, e.source};
    r.pass = r.residual <= tolerance;
    report.pass = report.pass && r.pass;
    report.entries.push_back(std::move(r));
  }
  return report;
}

}  // namespace wgeom

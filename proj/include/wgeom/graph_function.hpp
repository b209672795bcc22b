#pragma once

// Scalar functions u: R^n -> R whose graphs x_{n+1} = u(x) are the
// hypersurfaces studied by the graph, measure, calibration and flow code,
// plus the GridField discretization used by the flow.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgeom/core.hpp"
#include "wgeom/rng.hpp"

namespace wgeom {

class GraphFunction {
 public:
  using ScalarMap = std::function<double(const Vector&)>;
  using GradientMap = std::function<Vector(const Vector&)>;
  using HessianMap = std::function<Matrix(const Vector&)>;

  GraphFunction(int n, std::string name, ScalarMap u, GradientMap grad, std::optional<HessianMap> hess = std::nullopt)
      : n_(n), name_(std::move(name)), u_(std::move(u)), grad_(std::move(grad)), hess_(std::move(hess)) {
    if (n_ < 1) throw std::invalid_argument("graph dimension must be positive");
  }

  int dimension() const { return n_; }
  const std::string& name() const { return name_; }
  bool has_analytic_hessian() const { return hess_.has_value(); }

  double value(const Vector& x) const { return u_(x); }
  Vector gradient(const Vector& x) const { return grad_(x); }

  Matrix hessian(const Vector& x) const {
    if (hess_) return (*hess_)(x);
    // Central differences of the analytic gradient.
    Matrix H(n_, n_);
    for (int i = 0; i < n_; ++i) {
      Vector a = x;
      Vector b = x;
      a(i) += kHessianStep;
      b(i) -= kHessianStep;
      H.col(i) = (grad_(a) - grad_(b)) / (2.0 * kHessianStep);
    }
    return 0.5 * (H + H.transpose());
  }

  // Presets ---------------------------------------------------------------

  static GraphFunction constant(int n, double a) {
    return {n, "constant", [a](const Vector&) { return a; }, [n](const Vector&) { return Vector(Vector::Zero(n)); },
            [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); }};
  }

  /// u(x) = <slope, x> + offset.
  static GraphFunction linear(Vector slope, double offset = 0.0) {
    const auto n = static_cast<int>(slope.size());
    return {n, "linear", [slope, offset](const Vector& x) { return slope.dot(x) + offset; },
            [slope](const Vector&) { return slope; }, [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); }};
  }

  /// u(x) = x_1^2.
  static GraphFunction parabola(int n) {
    return {n, "parabola", [](const Vector& x) { return x(0) * x(0); },
            [n](const Vector& x) {
              Vector g = Vector::Zero(n);
              g(0) = 2.0 * x(0);
              return g;
            },
            [n](const Vector&) {
              Matrix H = Matrix::Zero(n, n);
              H(0, 0) = 2.0;
              return H;
            }};
  }

  /// u(x) = amplitude * prod_i sin(wavenumber * x_i).
  static GraphFunction sinusoid(int n, double amplitude = 0.5, double wavenumber = std::numbers::pi / 4.0) {
    const double A = amplitude;
    const double k = wavenumber;
    auto factors = [n, k](const Vector& x, std::vector<double>& s, std::vector<double>& c) {
      s.resize(static_cast<std::size_t>(n));
      c.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = std::sin(k * x(i));
        c[static_cast<std::size_t>(i)] = std::cos(k * x(i));
      }
    };
    // Product of the factors with index `skip_a` / `skip_b` replaced.
    auto product = [n](const std::vector<double>& s, int skip_a, double fa, int skip_b, double fb) {
      double p = 1.0;
      for (int i = 0; i < n; ++i) {
        if (i == skip_a) {
          p *= fa;
        } else if (i == skip_b) {
          p *= fb;
        } else {
          p *= s[static_cast<std::size_t>(i)];
        }
      }
      return p;
    };
    return {n, "sinusoid",
            [=](const Vector& x) {
              std::vector<double> s, c;
              factors(x, s, c);
              return A * product(s, -1, 0.0, -1, 0.0);
            },
            [=](const Vector& x) {
              std::vector<double> s, c;
              factors(x, s, c);
              Vector g(n);
              for (int i = 0; i < n; ++i) g(i) = A * k * product(s, i, c[static_cast<std::size_t>(i)], -1, 0.0);
              return g;
            },
            [=](const Vector& x) {
              std::vector<double> s, c;
              factors(x, s, c);
              Matrix H(n, n);
              for (int i = 0; i < n; ++i) {
                const auto si = static_cast<std::size_t>(i);
                H(i, i) = -A * k * k * product(s, i, s[si], -1, 0.0);
                for (int j = i + 1; j < n; ++j) {
                  H(i, j) = A * k * k * product(s, i, c[si], j, c[static_cast<std::size_t>(j)]);
                  H(j, i) = H(i, j);
                }
              }
              return H;
            }};
  }

  /// Sum of four Gaussian bumps with seeded centers in [-2, 2]^n, widths in
  /// [0.6, 1.4] and coefficients amplitude * U(-1, 1).
  static GraphFunction random_bump(int n, std::uint64_t seed = kDefaultSeed, double amplitude = 0.3) {
    struct Bump {
      Vector center;
      double inv_var;
      double coeff;
    };
    CounterRng rng(seed, 0x6275);
    std::vector<Bump> bumps;
    for (int b = 0; b < 4; ++b) {
      Vector c = rng.uniform_vector(n, -2.0, 2.0);
      const double width = rng.uniform(0.6, 1.4);
      const double coeff = amplitude * rng.uniform(-1.0, 1.0);
      bumps.push_back({std::move(c), 1.0 / (width * width), coeff});
    }
    return {n, "random_bump",
            [bumps](const Vector& x) {
              double v = 0.0;
              for (const auto& b : bumps) v += b.coeff * std::exp(-0.5 * b.inv_var * (x - b.center).squaredNorm());
              return v;
            },
            [bumps, n](const Vector& x) {
              Vector g = Vector::Zero(n);
              for (const auto& b : bumps) {
                const Vector d = x - b.center;
                g -= b.coeff * b.inv_var * std::exp(-0.5 * b.inv_var * d.squaredNorm()) * d;
              }
              return g;
            },
            [bumps, n](const Vector& x) {
              Matrix H = Matrix::Zero(n, n);
              for (const auto& b : bumps) {
                const Vector d = x - b.center;
                const double e = b.coeff * std::exp(-0.5 * b.inv_var * d.squaredNorm());
                H += e * (b.inv_var * b.inv_var * d * d.transpose() - b.inv_var * Matrix::Identity(n, n));
              }
              return H;
            }};
  }

  /// Names: "constant[:a]", "linear[:a1,...]", "parabola", "sinusoid[:amp,k]", "random_bump".
  static GraphFunction from_name(const std::string& spec, int n, std::uint64_t seed = kDefaultSeed);

 private:
  int n_;
  std::string name_;
  ScalarMap u_;
  GradientMap grad_;
  std::optional<HessianMap> hess_;
};

inline GraphFunction GraphFunction::from_name(const std::string& spec, int n, std::uint64_t seed) {
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : detail::split_numbers(spec.substr(colon + 1));
  if (head == "constant") return constant(n, args.empty() ? 0.0 : args[0]);
  if (head == "linear") {
    Vector slope = Vector::Zero(n);
    if (args.empty()) {
      slope(0) = 1.0;
    } else {
      for (int i = 0; i < n && i < static_cast<int>(args.size()); ++i) slope(i) = args[static_cast<std::size_t>(i)];
    }
    return linear(slope);
  }
  if (head == "parabola") return parabola(n);
  if (head == "sinusoid") {
    return sinusoid(n, args.size() > 0 ? args[0] : 0.5, args.size() > 1 ? args[1] : std::numbers::pi / 4.0);
  }
  if (head == "random_bump") return random_bump(n, seed, args.empty() ? 0.3 : args[0]);
  throw std::invalid_argument("unknown graph preset '" + spec + "'");
}

/// Samples of u on the box [-L, L]^n (n in {1, 2}) with m nodes per axis.
/// Storage is x-fastest: values[j * m + i] = u(x_i, y_j).
struct GridField {
  int n = 1;
  double half_width = 4.0;
  int nodes_per_axis = 3;
  std::vector<double> values;

  GridField(int dim, double L, int m) : n(dim), half_width(L), nodes_per_axis(m) {
    if (n != 1 && n != 2) throw std::invalid_argument("GridField supports n = 1 or 2");
    if (m < 3) throw std::invalid_argument("GridField needs at least 3 nodes per axis");
    if (!(L > 0.0)) throw std::invalid_argument("GridField half-width must be positive");
    values.assign(static_cast<std::size_t>(n == 1 ? m : m * m), 0.0);
  }

  static GridField sample(const GraphFunction& u, double L, int m) {
    GridField g(u.dimension(), L, m);
    for (std::size_t k = 0; k < g.values.size(); ++k) g.values[k] = u.value(g.node(k));
    return g;
  }

  double spacing() const { return 2.0 * half_width / (nodes_per_axis - 1); }
  std::size_t size() const { return values.size(); }
  double coordinate(int i) const { return -half_width + i * spacing(); }

  Vector node(std::size_t k) const {
    const int m = nodes_per_axis;
    if (n == 1) return make_vector({coordinate(static_cast<int>(k))});
    return make_vector({coordinate(static_cast<int>(k) % m), coordinate(static_cast<int>(k) / m)});
  }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace wgeom

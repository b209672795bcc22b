#pragma once

// Log-densities e^{-F} on R^n and on product spaces R^n x R.
//
// A Density stores F (the log-weight) and its gradient. Three kinds exist:
//   gaussian  F(x) = |x|^2/2 + (n/2) ln(2 pi)         (normalized, total mass 1)
//   radial    F(x) = phi(|x|) + ln Z                  (Z computed numerically)
//   product   F(x, z) = F_h(x) + h(z)                 (horizontal density, vertical profile)
// Weights are always stored normalized; log_normalization() exposes the
// additive constant separately.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "wgeom/core.hpp"
#include "wgeom/quadrature.hpp"

namespace wgeom {

/// A vertical profile h(z) with derivative h'(z), defined on the open
/// half-line z > lower_bound.
class Profile {
 public:
  enum class Kind { constant, quadratic, linear, paper_example };

  static Profile constant(double value = 0.0) {
    return Profile(
        Kind::constant, "constant", [value](double) { return value; }, [](double) { return 0.0; });
  }

  /// h(z) = z^2/2 + c z + b. The only profiles admitting tilted weighted-minimal hyperplanes.
  static Profile quadratic(double c = 0.0, double b = 0.0) {
    return Profile(
        Kind::quadratic, "quadratic", [c, b](double z) { return 0.5 * z * z + c * z + b; },
        [c](double z) { return z + c; });
  }

  /// h(z) = slope z; monotone whenever slope != 0.
  static Profile linear(double slope = 1.0) {
    return Profile(
        Kind::linear, "linear", [slope](double z) { return slope * z; }, [slope](double) { return slope; });
  }

  /// h(z) = z^2 - ln sqrt(1 + 4z) on z > -1/4. With this vertical weight the
  /// parabola z = x^2 over the Gaussian plane is weighted minimal.
  static Profile paper_example() {
    Profile p(
        Kind::paper_example, "paper_example", [](double z) { return z * z - 0.5 * std::log1p(4.0 * z); },
        [](double z) { return 2.0 * z - 2.0 / (1.0 + 4.0 * z); });
    p.lower_bound_ = -0.25;
    return p;
  }

  /// Parses "constant", "constant:<v>", "quadratic", "quadratic:<c>,<b>",
  /// "linear", "linear:<slope>" or "paper_example".
  static Profile from_name(const std::string& spec);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double lower_bound() const { return lower_bound_; }
  bool contains(double z) const { return z > lower_bound_ && std::isfinite(z); }

  double value(double z) const {
    check(z);
    return value_(z);
  }
  double derivative(double z) const {
    check(z);
    return derivative_(z);
  }

 private:
  Profile(Kind kind, std::string name, std::function<double(double)> value, std::function<double(double)> derivative)
      : kind_(kind), name_(std::move(name)), value_(std::move(value)), derivative_(std::move(derivative)) {}

  void check(double z) const {
    if (!contains(z)) {
      throw DomainError("profile '" + name_ + "' evaluated at z = " + std::to_string(z) +
                        " outside its domain z > " + std::to_string(lower_bound_));
    }
  }

  Kind kind_;
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double lower_bound_ = -std::numeric_limits<double>::infinity();
};

/// Radial log-weight phi(r), r = |x|, with phi'(r). Presets grow fast enough
/// for e^{-phi} to have finite mass in every dimension.
struct RadialProfile {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;

  static RadialProfile gaussian() {
    return {"gaussian", [](double r) { return 0.5 * r * r; }, [](double r) { return r; }};
  }
  static RadialProfile quartic() {
    return {"quartic", [](double r) { return 0.25 * r * r * r * r; }, [](double r) { return r * r * r; }};
  }
  static RadialProfile logcosh() {
    return {"logcosh", [](double r) { return 2.0 * std::log(std::cosh(r)); }, [](double r) { return 2.0 * std::tanh(r); }};
  }
  static RadialProfile from_name(const std::string& name) {
    if (name == "gaussian") return gaussian();
    if (name == "quartic") return quartic();
    if (name == "logcosh") return logcosh();
    throw std::invalid_argument("unknown radial preset '" + name + "'");
  }
};

/// Area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

class Density {
 public:
  enum class Kind { gaussian, radial, product };

  /// Normalized Gaussian on R^n.
  static Density gaussian(int n) {
    require_dimension(n);
    Density d(Kind::gaussian, n);
    d.log_norm_ = 0.5 * n * std::log(kTwoPi);
    return d;
  }

  /// Radial density e^{-phi(|x|)} / Z on R^n.
  static Density radial(int n, RadialProfile profile) {
    require_dimension(n);
    Density d(Kind::radial, n);
    d.log_norm_ = std::log(radial_mass(n, profile));
    d.radial_ = std::make_shared<const RadialProfile>(std::move(profile));
    return d;
  }

  /// Product density e^{-(F_h(x) + h(z))} on R^n x R.
  static Density product(const Density& horizontal, Profile vertical) {
    Density d(Kind::product, horizontal.dimension() + 1);
    d.horizontal_ = std::make_shared<const Density>(horizontal);
    d.vertical_ = std::make_shared<const Profile>(std::move(vertical));
    d.log_norm_ = horizontal.log_normalization();
    return d;
  }

  /// The Euclidean-Gaussian space G^n x R: Gaussian in x, constant in z.
  static Density gauss_times_line(int n) { return product(gaussian(n), Profile::constant(0.0)); }

  /// Parses "gaussian", "radial:<preset>" or "product:gaussian+<profile>".
  /// `dimension` is the ambient dimension of the resulting density.
  static Density from_name(const std::string& spec, int dimension);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double log_normalization() const { return log_norm_; }
  const Density& horizontal() const { return *horizontal_; }
  const Profile& vertical() const { return *vertical_; }
  const RadialProfile& radial_profile() const { return *radial_; }

  std::string name() const {
    switch (kind_) {
      case Kind::gaussian:
        return "gaussian";
      case Kind::radial:
        return "radial:" + radial_->name;
      case Kind::product:
        return "product:" + horizontal_->name() + "+" + vertical_->name();
    }
    return {};
  }

  double log_weight(const Vector& x) const {
    check_dimension(x);
    switch (kind_) {
      case Kind::gaussian:
        return 0.5 * x.squaredNorm() + log_norm_;
      case Kind::radial:
        return radial_->phi(x.norm()) + log_norm_;
      case Kind::product:
        return horizontal_->log_weight(x.head(dim_ - 1)) + vertical_->value(x(dim_ - 1));
    }
    return 0.0;
  }

  Vector grad_log_weight(const Vector& x) const {
    check_dimension(x);
    switch (kind_) {
      case Kind::gaussian:
        return x;
      case Kind::radial: {
        const double r = x.norm();
        if (r == 0.0) return Vector::Zero(dim_);
        return (radial_->dphi(r) / r) * x;
      }
      case Kind::product: {
        Vector g(dim_);
        g.head(dim_ - 1) = horizontal_->grad_log_weight(x.head(dim_ - 1));
        g(dim_ - 1) = vertical_->derivative(x(dim_ - 1));
        return g;
      }
    }
    return Vector::Zero(dim_);
  }

  double weight(const Vector& x) const { return std::exp(-log_weight(x)); }

 private:
  Density(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  static void require_dimension(int n) {
    if (n < 1) throw std::invalid_argument("density dimension must be positive");
  }

  void check_dimension(const Vector& x) const {
    if (x.size() != dim_) {
      throw std::invalid_argument("density of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                                  std::to_string(x.size()));
    }
  }

  // |S^{n-1}| * int_0^inf r^{n-1} e^{-phi(r)} dr, truncated where the integrand
  // has decayed below double precision.
  static double radial_mass(int n, const RadialProfile& p) {
    double r_max = 1.0;
    while (r_max < 1e3 && (n - 1) * std::log(r_max) - p.phi(r_max) > -745.0 + 40.0) r_max *= 1.5;
    const QuadratureRule rule = composite_gauss_legendre(32, 64, 0.0, r_max);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes[i];
      sum += rule.weights[i] * std::pow(r, n - 1) * std::exp(-p.phi(r));
    }
    return unit_sphere_area(n) * sum;
  }

  Kind kind_;
  int dim_;
  double log_norm_ = 0.0;
  std::shared_ptr<const Density> horizontal_;
  std::shared_ptr<const Profile> vertical_;
  std::shared_ptr<const RadialProfile> radial_;
};

inline Profile Profile::from_name(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : detail::split_numbers(spec.substr(colon + 1));
  auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? args[i] : fallback; };
  if (head == "constant") return constant(arg(0, 0.0));
  if (head == "quadratic") return quadratic(arg(0, 0.0), arg(1, 0.0));
  if (head == "linear") return linear(arg(0, 1.0));
  if (head == "paper_example") return paper_example();
  throw std::invalid_argument("unknown profile preset '" + spec + "'");
}

inline Density Density::from_name(const std::string& spec, int dimension) {
  if (spec == "gaussian") return gaussian(dimension);
  if (spec.rfind("radial:", 0) == 0) return radial(dimension, RadialProfile::from_name(spec.substr(7)));
  if (spec.rfind("product:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const std::size_t plus = rest.find('+');
    if (plus == std::string::npos) throw std::invalid_argument("product density needs '<horizontal>+<profile>'");
    if (dimension < 2) throw std::invalid_argument("product density needs ambient dimension >= 2");
    return product(from_name(rest.substr(0, plus), dimension - 1), Profile::from_name(rest.substr(plus + 1)));
  }
  throw std::invalid_argument("unknown density preset '" + spec + "'");
}

}  // namespace wgeom

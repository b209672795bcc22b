#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a density or profile is evaluated outside its domain of definition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the partial derivatives of a chart fail to span an n-plane.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Central-difference steps.
inline constexpr double kGradientStep = 1e-5;
inline constexpr double kHessianStep = 1e-4;

inline Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

namespace detail {

// "1.5,2,-3" -> {1.5, 2, -3}; empty tokens are skipped.
inline std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!token.empty()) out.push_back(std::stod(token));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

}  // namespace wgeom

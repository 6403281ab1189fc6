#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/exact/rational.hpp"

namespace qcl::exact {

// Polynomial in u = 1/r with exact coefficients; coefficients[j] multiplies u^j.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) { trim(); }

  const std::vector<Rational>& coefficients() const { return coefficients_; }
  bool is_zero() const { return coefficients_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  Rational constant_term() const { return is_zero() ? Rational(0) : coefficients_.front(); }

  Rational operator()(const Rational& u) const {
    Rational acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * u + *it;
    return acc;
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void trim() {
    while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
  }
  std::vector<Rational> coefficients_;
};

// The unique polynomial of degree < points.size() through the given (u, value)
// points, via Newton divided differences expanded into monomial form.
inline RationalPolynomial interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (points[i].first == points[j].first) throw InterpolationError("repeated interpolation point u=" + to_string(points[i].first));
    }
  }
  std::vector<Rational> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = points[i].second;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      diff[i] = (diff[i] - diff[i - 1]) / (points[i].first - points[i - level].first);
    }
  }
  // Horner in Newton form: p = d0 + (u - u0)(d1 + (u - u1)(d2 + ...)).
  std::vector<Rational> coeffs;
  for (std::size_t i = n; i-- > 0;) {
    // coeffs <- coeffs * (u - u_i) + diff[i]
    std::vector<Rational> next(coeffs.size() + 1, Rational(0));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j + 1] += coeffs[j];
      next[j] -= coeffs[j] * points[i].first;
    }
    next[0] += diff[i];
    coeffs = std::move(next);
  }
  return RationalPolynomial(std::move(coeffs));
}

}  // namespace qcl::exact

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace qcl::exact {

using BigInt = boost::multiprecision::cpp_int;
// Always stored in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace qcl::exact

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcl/errors.hpp"
#include "qcl/exact/enumerate.hpp"
#include "qcl/exact/polynomial.hpp"

namespace qcl::exact {

inline Rational inverse(RangeSize r) {
  return r.is_infinite() ? Rational(0) : Rational(BigInt(1), BigInt(r.value()));
}

// p(r) for the k-constraint set through the points r in `sample_rs`.
inline RationalPolynomial interpolate_in_inverse_r(DrModel& model, const ConstraintSet& constraints,
                                                   const std::vector<std::uint64_t>& sample_rs) {
  if (sample_rs.size() < constraints.size()) {
    throw InterpolationError("need at least k=" + std::to_string(constraints.size()) + " sample points");
  }
  std::vector<std::pair<Rational, Rational>> points;
  for (std::uint64_t r : sample_rs) {
    if (r == 0) throw InterpolationError("sample r must be positive");
    points.emplace_back(inverse(RangeSize::finite(r)), Rational(0));
  }
  // Reject repeats before paying for any enumeration.
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (sample_rs[i] == sample_rs[j]) throw InterpolationError("repeated sample r=" + std::to_string(sample_rs[i]));
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].second = model.joint_probability(constraints, RangeSize::finite(sample_rs[i]));
  }
  return interpolate(points);
}

inline RationalPolynomial interpolate_in_inverse_r(std::uint64_t n, const ConstraintSet& constraints,
                                                   const std::vector<std::uint64_t>& sample_rs,
                                                   const EnumerationCaps& caps = {}) {
  DrModel model(n, caps);
  return interpolate_in_inverse_r(model, constraints, sample_rs);
}

struct HeldOutCheck {
  RangeSize r;
  Rational expected;   // enumerated p(r)
  Rational predicted;  // interpolant at u = 1/r
  bool ok = false;
};

struct DegreeCertificate {
  ConstraintSet constraints;
  std::vector<std::uint64_t> interpolation_rs;
  RationalPolynomial interpolant;
  std::vector<HeldOutCheck> checks;
  bool pass = false;
};

// Fits the degree <= k-1 interpolant through r = interpolation_rs and checks
// it, by exact equality, against `probability` at every held-out r and at
// r = infinity (where u = 0, i.e. the constant term).
inline DegreeCertificate certify_degree_bound(const std::function<Rational(RangeSize)>& probability,
                                              const ConstraintSet& constraints,
                                              const std::vector<std::uint64_t>& interpolation_rs,
                                              const std::vector<std::uint64_t>& test_rs) {
  for (std::uint64_t r : test_rs) {
    if (std::find(interpolation_rs.begin(), interpolation_rs.end(), r) != interpolation_rs.end()) {
      throw ParameterError("held-out r=" + std::to_string(r) + " is also an interpolation point");
    }
  }
  DegreeCertificate cert;
  cert.constraints = constraints;
  cert.interpolation_rs = interpolation_rs;
  std::vector<std::pair<Rational, Rational>> points;
  for (std::uint64_t r : interpolation_rs) {
    points.emplace_back(inverse(RangeSize::finite(r)), probability(RangeSize::finite(r)));
  }
  cert.interpolant = interpolate(points);

  std::vector<RangeSize> held_out;
  for (std::uint64_t r : test_rs) held_out.push_back(RangeSize::finite(r));
  held_out.push_back(RangeSize::infinity());

  cert.pass = cert.interpolant.degree() < static_cast<int>(std::max<std::size_t>(constraints.size(), 1));
  for (RangeSize r : held_out) {
    HeldOutCheck check{r, probability(r), cert.interpolant(inverse(r))};
    check.ok = check.expected == check.predicted;
    cert.pass = cert.pass && check.ok;
    cert.checks.push_back(std::move(check));
  }
  return cert;
}

// Interpolation points are r = 1..k.
inline DegreeCertificate certify_degree_bound(DrModel& model, const ConstraintSet& constraints,
                                              const std::vector<std::uint64_t>& test_rs) {
  std::vector<std::uint64_t> interp(std::max<std::size_t>(constraints.size(), 1));
  std::iota(interp.begin(), interp.end(), std::uint64_t{1});
  return certify_degree_bound([&](RangeSize r) { return model.joint_probability(constraints, r); }, constraints,
                              interp, test_rs);
}

inline DegreeCertificate certify_degree_bound(std::uint64_t n, const ConstraintSet& constraints,
                                              const std::vector<std::uint64_t>& test_rs,
                                              const EnumerationCaps& caps = {}) {
  DrModel model(n, caps);
  return certify_degree_bound(model, constraints, test_rs);
}

inline nlohmann::json rational_json(const Rational& q) {
  return {{"num", boost::multiprecision::numerator(q).str()}, {"den", boost::multiprecision::denominator(q).str()}};
}

inline void to_json(nlohmann::json& j, const DegreeCertificate& c) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [x, y] : c.constraints.pairs) pairs.push_back({x, y});
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& q : c.interpolant.coefficients()) coeffs.push_back(rational_json(q));
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& h : c.checks) {
    checks.push_back({{"r", h.r.str()},
                      {"expected", to_string(h.expected)},
                      {"predicted", to_string(h.predicted)},
                      {"ok", h.ok}});
  }
  j = {{"constraints", pairs},
       {"interpolation_rs", c.interpolation_rs},
       {"coefficients", coeffs},
       {"held_out", checks},
       {"pass", c.pass}};
}

// Every constraint set on [N] with k pairs and strictly increasing (hence
// distinct) x's, crossed with every choice of targets.
inline std::vector<ConstraintSet> all_constraint_sets(std::uint64_t n, std::size_t k) {
  std::vector<ConstraintSet> out;
  if (k == 0 || k > n) return out;
  std::vector<bool> chosen(n, false);
  std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<Point> xs;
    for (std::uint64_t x = 0; x < n; ++x)
      if (chosen[x]) xs.push_back(static_cast<Point>(x));
    std::vector<std::uint64_t> ys(k, 0);
    do {
      ConstraintSet c;
      for (std::size_t i = 0; i < k; ++i) c.pairs.emplace_back(xs[i], static_cast<Point>(ys[i]));
      out.push_back(std::move(c));
    } while (detail::next_word(ys, n));
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
  return out;
}

}  // namespace qcl::exact

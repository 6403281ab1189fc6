#pragma once

#include "qcl/errors.hpp"
#include "qcl/exact/enumerate.hpp"

namespace qcl::exact {

// Exact total variation distance between two enumerated table distributions.
inline Rational tv_distance(const TableDistribution& a, const TableDistribution& b) {
  if (a.m != b.m || a.n != b.n) throw DimensionMismatch("distributions are over different table spaces");
  // (1/2) sum |wa/Ta - wb/Tb| = sum |wa*Tb - wb*Ta| / (2 Ta Tb)
  const BigInt ta = a.total;
  const BigInt tb = b.total;
  BigInt acc = 0;
  for (std::size_t c = 0; c < a.weights.size(); ++c) {
    BigInt d = BigInt(a.weights[c]) * tb - BigInt(b.weights[c]) * ta;
    acc += abs(d);
  }
  return Rational(acc, 2 * ta * tb);
}

inline Rational tv_distance(const DistributionSpec& a, const DistributionSpec& b, const EnumerationCaps& caps = {}) {
  if (a.domain_size != b.domain_size || a.codomain_size != b.codomain_size) {
    throw DimensionMismatch("tv_distance needs identical (M, N): " + a.name() + " vs " + b.name());
  }
  return tv_distance(enumerate_distribution(a, caps), enumerate_distribution(b, caps));
}

}  // namespace qcl::exact

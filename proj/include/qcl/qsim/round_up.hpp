#pragma once

#include <cstdint>
#include <vector>

#include "qcl/oracles/function_table.hpp"
#include "qcl/rng.hpp"

namespace qcl::qsim {

// Smallest N * 2^j (j >= 0) that is at least M.
inline std::uint64_t rounded_domain_size(std::uint64_t m, std::uint64_t n) {
  std::uint64_t size = n;
  while (size < m) size *= 2;
  return size;
}

// Extends f : [M] -> [N] to [N * 2^j] >= M by giving the new inputs fresh
// uniform images. The first M entries are untouched, so a collision found
// among them is a collision of the original table.
inline FunctionTable round_up_domain(const FunctionTable& f, std::uint64_t seed) {
  const std::uint64_t target = rounded_domain_size(f.domain_size(), f.codomain_size());
  if (target == f.domain_size()) return f;
  Rng rng(seed, "qsim.round-up");
  std::vector<Point> images(f.images().begin(), f.images().end());
  images.reserve(target);
  while (images.size() < target) images.push_back(static_cast<Point>(rng.below(f.codomain_size())));
  return {target, f.codomain_size(), std::move(images)};
}

}  // namespace qcl::qsim

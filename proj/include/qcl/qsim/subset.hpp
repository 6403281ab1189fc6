#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/qsim/bht.hpp"

namespace qcl::qsim {

using IndexPair = std::pair<std::size_t, std::size_t>;

// Solver contract: given the images of a function promised to have at most
// one collision, return the colliding positions (bounded error allowed), or
// nothing if it believes the function is injective.
template <typename S>
concept DistinctnessSolver = requires(S s, std::span<const Point> images) {
  { s(images) } -> std::convertible_to<std::optional<IndexPair>>;
};

// Classical reference solver: exact, by hashing all images. Returns the
// first repeat found scanning left to right, as (earlier, later).
inline std::optional<IndexPair> element_distinctness_bruteforce(std::span<const Point> images) {
  std::unordered_map<Point, std::size_t> seen;
  seen.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto [it, fresh] = seen.emplace(images[i], i);
    if (!fresh) return IndexPair{it->second, i};
  }
  return std::nullopt;
}

struct BruteForceSolver {
  std::optional<IndexPair> operator()(std::span<const Point> images) const {
    return element_distinctness_bruteforce(images);
  }
};

// Subset sizes for the restriction reduction. The Poisson rate of collisions
// in a random subset of size s is C(s, 2) / N: about 1 at ceil(sqrt(2N)), and
// about 1/8 at the literal ceil(sqrt(N) / 2).
inline std::uint64_t default_subset_size(std::uint64_t n) {
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n))));
}
inline std::uint64_t literal_subset_size(std::uint64_t n) {
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n)) / 2.0));
}

struct SubsetAttempt {
  std::uint64_t colliding_pairs = 0;  // instrumentation: true collision count inside the subset
  bool solver_claimed = false;
  bool verified = false;
};

struct SubsetResult {
  std::optional<CollisionClaim> claim;
  QueryBudget budget;
  std::vector<SubsetAttempt> attempts;

  bool success() const { return claim.has_value() && claim->verified; }
};

// Restricts f to a uniformly random subset of the given size, hands the
// restriction to the element-distinctness solver and checks its answer with
// two queries. Fresh subsets are drawn up to `attempts` times. Each read of
// the restriction by the solver is charged as one query.
template <DistinctnessSolver Solver>
SubsetResult subset_restriction_collision(const FunctionTable& table, std::uint64_t subset_size, Solver&& solver,
                                          std::uint64_t seed, std::size_t attempts = 1) {
  if (subset_size == 0 || subset_size > table.domain_size()) {
    throw ParameterError("subset size must be in [1, M]");
  }
  SubsetResult result;
  for (std::size_t a = 0; a < attempts; ++a) {
    Rng rng(seed, "qsim.subset.choose", a);
    const std::vector<Point> subset = rng.sample_distinct(table.domain_size(), subset_size);
    std::vector<Point> restricted(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) restricted[i] = table(subset[i]);
    result.budget.charge(subset.size());

    SubsetAttempt attempt;
    attempt.colliding_pairs = collision_profile(restricted).colliding_pairs();
    const std::optional<IndexPair> found = solver(std::span<const Point>(restricted));
    if (found) {
      attempt.solver_claimed = true;
      if (found->first >= subset.size() || found->second >= subset.size()) {
        throw ContractViolation("solver returned positions outside the subset");
      }
      ClassicalOracle f(table, result.budget);
      const CollisionClaim claim = verify_claim(f, subset[found->first], subset[found->second]);
      attempt.verified = claim.verified;
      result.attempts.push_back(attempt);
      if (claim.verified) {
        result.claim = claim;
        return result;
      }
      continue;
    }
    result.attempts.push_back(attempt);
  }
  return result;
}

}  // namespace qcl::qsim

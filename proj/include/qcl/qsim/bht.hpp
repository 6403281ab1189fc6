#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/qsim/grover.hpp"
#include "qcl/qsim/statevector.hpp"

namespace qcl::qsim {

// A claimed collision. verified implies x1 != x2 and f(x1) == f(x2).
struct CollisionClaim {
  Point x1 = 0;
  Point x2 = 0;
  bool verified = false;
};

struct SearchResult {
  std::optional<CollisionClaim> claim;
  QueryBudget budget;
  std::uint64_t grover_iterations = 0;
  std::size_t rounds = 0;
  bool from_table = false;

  bool success() const { return claim.has_value() && claim->verified; }
};

// Checks a candidate pair with two classical queries.
inline CollisionClaim verify_claim(const ClassicalOracle& f, Point x1, Point x2) {
  const Point a = f(x1);
  const Point b = f(x2);
  return {x1, x2, x1 != x2 && a == b};
}

struct BhtOptions {
  std::size_t max_rounds = 16;
  double growth = 1.2;  // cutoff multiplier between rounds
};

// Table points for BHT: k distinct inputs, drawn from the seed's table stream.
inline std::vector<Point> bht_table_points(std::uint64_t domain_size, std::size_t k, std::uint64_t seed) {
  Rng rng(seed, "qsim.bht.table");
  return rng.sample_distinct(domain_size, k);
}

// Upper end of the random-cutoff schedule: the iteration count that would be
// optimal if exactly one element were marked.
inline double bht_cutoff_cap(std::uint64_t space) {
  return std::ceil(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(space)));
}

namespace detail {

struct TableScan {
  std::unordered_map<Point, Point> owner;  // image -> table input
  std::optional<std::pair<Point, Point>> collision;
};

inline TableScan scan_table(const ClassicalOracle& f, const std::vector<Point>& table) {
  TableScan scan;
  for (Point x : table) {
    const Point y = f(x);
    auto [it, fresh] = scan.owner.emplace(y, x);
    if (!fresh && !scan.collision) scan.collision = std::make_pair(it->second, x);
  }
  return scan;
}

// Inputs outside the table, and which of them hit an image in the table.
inline void search_space(const FunctionTable& table, const std::vector<Point>& points, const TableScan& scan,
                         std::vector<Point>& space, std::vector<std::uint64_t>& marked) {
  std::vector<bool> in_table(table.domain_size(), false);
  for (Point x : points) in_table[x] = true;
  for (std::uint64_t x = 0; x < table.domain_size(); ++x) {
    if (in_table[x]) continue;
    if (scan.owner.count(table(x))) marked.push_back(space.size());
    space.push_back(static_cast<Point>(x));
  }
}

}  // namespace detail

// Brassard-Hoyer-Tapp collision search: classical table of k images, then
// Grover over the remaining inputs for one whose image is in the table.
// Since the marked count is unknown, rounds use the random-cutoff schedule:
// round i runs j iterations with j uniform below ceil(m_i), m_1 = 1,
// m_{i+1} = min(growth * m_i, cap). Each Grover iteration computes and
// uncomputes f, so it costs 2 queries; every candidate is verified with 2.
inline SearchResult bht_collision(const FunctionTable& table, std::size_t k, std::uint64_t seed,
                                  const BhtOptions& options = {}) {
  if (k == 0 || k >= table.domain_size()) throw ParameterError("BHT table size must satisfy 1 <= k < M");
  SearchResult result;
  ClassicalOracle f(table, result.budget);
  const std::vector<Point> points = bht_table_points(table.domain_size(), k, seed);
  const detail::TableScan scan = detail::scan_table(f, points);
  if (scan.collision) {
    result.from_table = true;
    result.claim = verify_claim(f, scan.collision->first, scan.collision->second);
    return result;
  }

  std::vector<Point> space;
  std::vector<std::uint64_t> marked;
  detail::search_space(table, points, scan, space, marked);

  Rng rng(seed, "qsim.bht.search");
  const double cap = bht_cutoff_cap(space.size());
  double m = 1.0;
  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    const auto j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
    const GroverOutcome out = run_grover(space.size(), marked, j, rng, result.budget, 2);
    result.grover_iterations += j;
    result.rounds = round + 1;
    // Two-query check: read the candidate's image, look up its partner in the
    // table, and re-read the partner.
    const Point x = space[out.index];
    const Point y = f(x);
    const auto partner = scan.owner.find(y);
    const Point x_t = partner != scan.owner.end() ? partner->second : points.front();
    const CollisionClaim claim{x_t, x, x_t != x && f(x_t) == y};
    if (claim.verified) {
      result.claim = claim;
      return result;
    }
    m = std::min(options.growth * m, cap);
  }
  return result;
}

// Split of a total budget q between the classical table (k queries) and
// Grover iterations (2 queries each), keeping one query to read the measured
// candidate: t = floor((q - 1) / 3), k = q - 1 - 2t.
struct BudgetSplit {
  std::uint64_t table = 0;
  std::uint64_t iterations = 0;
};

inline BudgetSplit split_budget(std::uint64_t q) {
  if (q < 2) return {};
  const std::uint64_t t = (q - 1) / 3;
  return {q - 1 - 2 * t, t};
}

// BHT with a hard query budget q and a single Grover round of fixed length.
// The candidate's partner image is already in the table, so one query for
// the candidate completes the check; total queries never exceed q.
inline SearchResult bht_budgeted(const FunctionTable& table, std::uint64_t q, std::uint64_t seed) {
  SearchResult result;
  const BudgetSplit split = split_budget(q);
  if (split.table == 0 || split.table >= table.domain_size()) return result;
  ClassicalOracle f(table, result.budget);
  const std::vector<Point> points = bht_table_points(table.domain_size(), split.table, seed);
  const detail::TableScan scan = detail::scan_table(f, points);
  if (scan.collision) {
    result.from_table = true;
    result.claim = CollisionClaim{scan.collision->first, scan.collision->second, true};
    return result;
  }
  std::vector<Point> space;
  std::vector<std::uint64_t> marked;
  detail::search_space(table, points, scan, space, marked);
  Rng rng(seed, "qsim.bht.search");
  const GroverOutcome out = run_grover(space.size(), marked, split.iterations, rng, result.budget, 2);
  result.grover_iterations = split.iterations;
  result.rounds = 1;
  const Point x = space[out.index];
  const Point y = f(x);
  if (const auto it = scan.owner.find(y); it != scan.owner.end()) {
    result.claim = CollisionClaim{it->second, x, it->second != x};
  }
  return result;
}

// Claw search for set equality under the same budget split: a table of f
// images, then Grover over the domain of g for x with g(x) in the table.
// A claim (x1, x2) means f(x1) == g(x2).
inline SearchResult claw_budgeted(const FunctionTable& f_table, const FunctionTable& g_table, std::uint64_t q,
                                  std::uint64_t seed) {
  if (f_table.codomain_size() != g_table.codomain_size()) throw DimensionMismatch("f and g codomains differ");
  SearchResult result;
  const BudgetSplit split = split_budget(q);
  if (split.table == 0 || split.table > f_table.domain_size()) return result;
  ClassicalOracle f(f_table, result.budget);
  ClassicalOracle g(g_table, result.budget);
  const std::vector<Point> points = bht_table_points(f_table.domain_size(), split.table, seed);
  std::unordered_map<Point, Point> owner;
  for (Point x : points) owner.emplace(f(x), x);
  std::vector<std::uint64_t> marked;
  for (std::uint64_t x = 0; x < g_table.domain_size(); ++x)
    if (owner.count(g_table(x))) marked.push_back(x);
  Rng rng(seed, "qsim.bht.search");
  const GroverOutcome out = run_grover(g_table.domain_size(), marked, split.iterations, rng, result.budget, 2);
  result.grover_iterations = split.iterations;
  result.rounds = 1;
  const Point x = static_cast<Point>(out.index);
  if (const auto it = owner.find(g(x)); it != owner.end()) result.claim = CollisionClaim{it->second, x, true};
  return result;
}

inline nlohmann::json transcript_json(const std::string& algorithm, std::uint64_t seed, const SearchResult& r) {
  nlohmann::json j{{"algorithm", algorithm},
                   {"seed", seed},
                   {"queries", r.budget.q},
                   {"grover_iterations", r.grover_iterations},
                   {"rounds", r.rounds},
                   {"outcome", r.success() ? "collision" : "failure"}};
  if (r.claim) j["claim"] = {{"x1", r.claim->x1}, {"x2", r.claim->x2}, {"verified", r.claim->verified}};
  return j;
}

}  // namespace qcl::qsim

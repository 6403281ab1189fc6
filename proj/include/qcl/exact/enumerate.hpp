#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/exact/rational.hpp"
#include "qcl/oracles/distribution.hpp"

namespace qcl::exact {

// Desk-scale limits for exhaustive enumeration.
struct EnumerationCaps {
  std::uint64_t max_n = 5;
  std::uint64_t max_r = 12;
  std::uint64_t max_table_space = 1ULL << 20;  // N^M distinct tables
  std::uint64_t max_steps = 200'000'000;       // enumerated (g, h) pairs
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit, const char* what) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > limit / base) throw CapExceeded(std::string(what) + " exceeds enumeration cap");
    out *= base;
  }
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit, const char* what) {
  if (a != 0 && b > limit / a) throw CapExceeded(std::string(what) + " exceeds enumeration cap");
  return a * b;
}

inline std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 2; i <= n; ++i) out *= i;
  return out;
}

// Advances a little-endian base-`radix` counter; false once it wraps to zero.
inline bool next_word(std::vector<std::uint64_t>& digits, std::uint64_t radix) {
  for (auto& d : digits) {
    if (++d < radix) return true;
    d = 0;
  }
  return false;
}

}  // namespace detail

// Exact distribution over tables [M] -> [N]: table with code c (images read as
// a little-endian base-N number) has probability weights[c] / total.
struct TableDistribution {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> weights;
  std::uint64_t total = 0;

  TableDistribution(std::uint64_t m_, std::uint64_t n_, const EnumerationCaps& caps) : m(m_), n(n_) {
    weights.assign(detail::checked_pow(n, m, caps.max_table_space, "table space N^M"), 0);
  }

  std::uint64_t code(const std::vector<Point>& images) const {
    std::uint64_t c = 0;
    for (std::size_t x = images.size(); x-- > 0;) c = c * n + images[x];
    return c;
  }

  std::vector<Point> decode(std::uint64_t c) const {
    std::vector<Point> images(m);
    for (auto& y : images) {
      y = static_cast<Point>(c % n);
      c /= n;
    }
    return images;
  }

  void add(const std::vector<Point>& images, std::uint64_t w = 1) {
    weights[code(images)] += w;
    total += w;
  }

  Rational probability(std::uint64_t c) const { return Rational(BigInt(weights[c]), BigInt(total)); }
};

namespace detail {

// Every g : [M] -> [r] crossed with every permutation of [N], whose first
// |image(g)| slots give h on image(g) in increasing order. Uniform weight on
// permutations is uniform weight on injective h, each counted (N-|S|)! times.
inline void enumerate_dr_finite(TableDistribution& dist, std::uint64_t r, const EnumerationCaps& caps) {
  const std::uint64_t m = dist.m;
  const std::uint64_t n = dist.n;
  const std::uint64_t g_count = checked_pow(r, m, caps.max_steps, "r^M");
  checked_mul(g_count, factorial(n), caps.max_steps, "r^M * N!");

  std::vector<std::uint64_t> g(m, 0);
  std::vector<std::uint64_t> support;
  std::vector<Point> perm(n);
  std::vector<Point> images(m);
  do {
    support.assign(g.begin(), g.end());
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.size() > n) continue;
    std::vector<std::size_t> rank(m);
    for (std::size_t x = 0; x < m; ++x) {
      rank[x] = static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), g[x]) - support.begin());
    }
    std::iota(perm.begin(), perm.end(), Point{0});
    do {
      for (std::size_t x = 0; x < m; ++x) images[x] = perm[rank[x]];
      dist.add(images);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_word(g, r));
}

// r = infinity: g ranges over the injective labelings of [M] (all of which
// induce the same ranks up to relabeling), h over permutations of [N].
inline void enumerate_dr_infinite(TableDistribution& dist, const EnumerationCaps& caps) {
  const std::uint64_t m = dist.m;
  const std::uint64_t n = dist.n;
  if (m > n) throw ParameterError("DR(inf) requires M <= N");
  checked_mul(factorial(m), factorial(n), caps.max_steps, "M! * N!");

  std::vector<Point> g(m);
  std::iota(g.begin(), g.end(), Point{0});
  std::vector<Point> perm(n);
  std::vector<Point> images(m);
  do {
    std::iota(perm.begin(), perm.end(), Point{0});
    do {
      for (std::size_t x = 0; x < m; ++x) images[x] = perm[g[x]];
      dist.add(images);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (std::next_permutation(g.begin(), g.end()));
}

inline void enumerate_small_range(TableDistribution& dist, std::uint64_t r, const EnumerationCaps& caps) {
  const std::uint64_t m = dist.m;
  const std::uint64_t n = dist.n;
  checked_mul(checked_pow(r, m, caps.max_steps, "r^M"), checked_pow(n, r, caps.max_steps, "N^r"), caps.max_steps,
              "r^M * N^r");
  std::vector<std::uint64_t> g(m, 0);
  std::vector<std::uint64_t> h(r, 0);
  std::vector<Point> images(m);
  do {
    std::fill(h.begin(), h.end(), 0);
    do {
      for (std::size_t x = 0; x < m; ++x) images[x] = static_cast<Point>(h[g[x]]);
      dist.add(images);
    } while (next_word(h, n));
  } while (next_word(g, r));
}

}  // namespace detail

// Full enumeration of the distribution a spec induces on tables. Supports the
// table-valued kinds: Uniform, Permutation, Injective, DR(r or inf), SmallRange.
inline TableDistribution enumerate_distribution(const DistributionSpec& spec, const EnumerationCaps& caps = {}) {
  spec.validate();
  const std::uint64_t m = spec.domain_size;
  const std::uint64_t n = spec.codomain_size;
  if (n > caps.max_n || m > caps.max_n) {
    throw CapExceeded("enumeration cap exceeded: M=" + std::to_string(m) + ", N=" + std::to_string(n) +
                      " (cap " + std::to_string(caps.max_n) + ")");
  }
  TableDistribution dist(m, n, caps);
  switch (spec.kind) {
    case DistributionKind::Uniform:
      for (std::uint64_t c = 0; c < dist.weights.size(); ++c) dist.weights[c] = 1;
      dist.total = dist.weights.size();
      break;
    case DistributionKind::Permutation:
    case DistributionKind::Injective:
      for (std::uint64_t c = 0; c < dist.weights.size(); ++c) {
        const auto images = dist.decode(c);
        if (collision_profile(images).distinct_images() == m) dist.add(images);
      }
      break;
    case DistributionKind::DR:
      if (spec.r.is_infinite()) {
        detail::enumerate_dr_infinite(dist, caps);
      } else {
        if (spec.r.value() > caps.max_r) throw CapExceeded("r=" + spec.r.str() + " exceeds enumeration cap");
        detail::enumerate_dr_finite(dist, spec.r.value(), caps);
      }
      break;
    case DistributionKind::SmallRange:
      if (spec.r.value() > caps.max_r) throw CapExceeded("r=" + spec.r.str() + " exceeds enumeration cap");
      detail::enumerate_small_range(dist, spec.r.value(), caps);
      break;
    default:
      throw ParameterError(spec.name() + " is not a single-table distribution; cannot enumerate");
  }
  return dist;
}

// k pairs (x_i, y_i) asking that f(x_i) = y_i for all i.
struct ConstraintSet {
  std::vector<std::pair<Point, Point>> pairs;

  std::size_t size() const { return pairs.size(); }

  ConstraintSet with(std::pair<Point, Point> next) const {
    ConstraintSet out = *this;
    out.pairs.push_back(next);
    return out;
  }

  // Number of distinct targets y_i; the factor analysis calls this l.
  std::size_t distinct_targets() const {
    std::vector<Point> ys;
    for (const auto& [x, y] : pairs) ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    return static_cast<std::size_t>(std::unique(ys.begin(), ys.end()) - ys.begin());
  }

  bool satisfied_by(const std::vector<Point>& images) const {
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) { return images[p.first] == p.second; });
  }
};

// Exact D_r probabilities on [N] -> [N], memoizing one enumeration per r.
class DrModel {
 public:
  explicit DrModel(std::uint64_t n, EnumerationCaps caps = {}) : n_(n), caps_(caps) {
    if (n == 0) throw ParameterError("N must be positive");
    if (n > caps_.max_n) throw CapExceeded("N=" + std::to_string(n) + " exceeds enumeration cap " + std::to_string(caps_.max_n));
  }

  std::uint64_t n() const { return n_; }

  const TableDistribution& distribution(RangeSize r) {
    const std::uint64_t key = r.is_infinite() ? 0 : r.value();
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      if (!r.is_infinite() && r.value() == 0) throw ParameterError("r must be positive");
      it = cache_.emplace(key, enumerate_distribution(DistributionSpec::dr(n_, n_, r), caps_)).first;
    }
    return it->second;
  }

  // Pr_{f <- D_r}[f(x_i) = y_i for all i].
  Rational joint_probability(const ConstraintSet& constraints, RangeSize r) {
    for (const auto& [x, y] : constraints.pairs) {
      if (x >= n_ || y >= n_) throw ParameterError("constraint point outside [N]");
    }
    const TableDistribution& dist = distribution(r);
    std::uint64_t hits = 0;
    for (std::uint64_t c = 0; c < dist.weights.size(); ++c) {
      if (dist.weights[c] != 0 && constraints.satisfied_by(dist.decode(c))) hits += dist.weights[c];
    }
    return Rational(BigInt(hits), BigInt(dist.total));
  }

  // Pr[f(x_k) = y_k | f(x_i) = y_i for the prior pairs].
  Rational conditional_factor(const ConstraintSet& prior, std::pair<Point, Point> next, RangeSize r) {
    const Rational base = joint_probability(prior, r);
    if (base == 0) throw ConditioningError("prior constraints have probability zero under D_" + r.str());
    return joint_probability(prior.with(next), r) / base;
  }

 private:
  std::uint64_t n_;
  EnumerationCaps caps_;
  std::map<std::uint64_t, TableDistribution> cache_;
};

inline Rational exact_joint_probability(std::uint64_t n, RangeSize r, const ConstraintSet& constraints,
                                        const EnumerationCaps& caps = {}) {
  DrModel model(n, caps);
  return model.joint_probability(constraints, r);
}

inline Rational conditional_factor(std::uint64_t n, RangeSize r, const ConstraintSet& prior,
                                   std::pair<Point, Point> next, const EnumerationCaps& caps = {}) {
  DrModel model(n, caps);
  return model.conditional_factor(prior, next, r);
}

}  // namespace qcl::exact

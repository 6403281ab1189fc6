#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/oracles/hybrid.hpp"
#include "qcl/rng.hpp"

namespace qcl {

// Size r of the intermediate range in D_r; may be infinite.
class RangeSize {
 public:
  constexpr RangeSize() = default;
  static constexpr RangeSize finite(std::uint64_t r) { return RangeSize(r, false); }
  static constexpr RangeSize infinity() { return RangeSize(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint64_t value() const { return value_; }
  std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

  friend constexpr bool operator==(const RangeSize&, const RangeSize&) = default;

 private:
  constexpr RangeSize(std::uint64_t v, bool inf) : value_(v), infinite_(inf) {}
  std::uint64_t value_ = 1;
  bool infinite_ = false;
};

enum class DistributionKind { Uniform, Permutation, Injective, DR, SmallRange, HybridChain, SetEquality };

inline std::string to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::Uniform: return "uniform";
    case DistributionKind::Permutation: return "permutation";
    case DistributionKind::Injective: return "injective";
    case DistributionKind::DR: return "dr";
    case DistributionKind::SmallRange: return "small-range";
    case DistributionKind::HybridChain: return "hybrid";
    case DistributionKind::SetEquality: return "set-equality";
  }
  return "unknown";
}

// Which function distribution to sample. For SetEquality, domain_size is the
// common domain [N] of f and g and codomain_size is [M] with M >= 2N.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::Uniform;
  std::uint64_t domain_size = 1;
  std::uint64_t codomain_size = 1;
  std::uint64_t seed = 0;
  RangeSize r;              // DR and SmallRange
  std::size_t depth = 0;    // HybridChain
  int case_label = 1;       // SetEquality

  static DistributionSpec make(DistributionKind kind, std::uint64_t m, std::uint64_t n, std::uint64_t seed) {
    DistributionSpec s;
    s.kind = kind;
    s.domain_size = m;
    s.codomain_size = n;
    s.seed = seed;
    return s;
  }
  static DistributionSpec uniform(std::uint64_t m, std::uint64_t n, std::uint64_t seed = 0) {
    return make(DistributionKind::Uniform, m, n, seed);
  }
  static DistributionSpec permutation(std::uint64_t n, std::uint64_t seed = 0) {
    return make(DistributionKind::Permutation, n, n, seed);
  }
  static DistributionSpec injective(std::uint64_t m, std::uint64_t n, std::uint64_t seed = 0) {
    return make(DistributionKind::Injective, m, n, seed);
  }
  static DistributionSpec dr(std::uint64_t m, std::uint64_t n, RangeSize r, std::uint64_t seed = 0) {
    DistributionSpec s = make(DistributionKind::DR, m, n, seed);
    s.r = r;
    return s;
  }
  static DistributionSpec small_range(std::uint64_t m, std::uint64_t n, std::uint64_t r, std::uint64_t seed = 0) {
    DistributionSpec s = make(DistributionKind::SmallRange, m, n, seed);
    s.r = RangeSize::finite(r);
    return s;
  }
  static DistributionSpec hybrid(std::uint64_t n, std::size_t depth, std::uint64_t seed = 0) {
    DistributionSpec s = make(DistributionKind::HybridChain, n << depth, n, seed);
    s.depth = depth;
    return s;
  }
  static DistributionSpec set_equality(std::uint64_t n, std::uint64_t m, int case_label, std::uint64_t seed = 0) {
    DistributionSpec s = make(DistributionKind::SetEquality, n, m, seed);
    s.case_label = case_label;
    return s;
  }

  DistributionSpec with_seed(std::uint64_t s) const {
    DistributionSpec copy = *this;
    copy.seed = s;
    return copy;
  }

  std::string name() const {
    std::string out = to_string(kind);
    if (kind == DistributionKind::DR || kind == DistributionKind::SmallRange) out += "(" + r.str() + ")";
    if (kind == DistributionKind::HybridChain) out += "(" + std::to_string(depth) + ")";
    if (kind == DistributionKind::SetEquality) out += "(" + std::to_string(case_label) + ")";
    return out;
  }

  void validate() const {
    const std::uint64_t m = domain_size;
    const std::uint64_t n = codomain_size;
    if (m == 0 || n == 0) throw ParameterError("domain and codomain sizes must be positive");
    if (n > std::numeric_limits<Point>::max()) throw ParameterError("codomain too large for 32-bit points");
    switch (kind) {
      case DistributionKind::Uniform: break;
      case DistributionKind::Permutation:
      case DistributionKind::Injective:
        if (m > n) throw ParameterError(to_string(kind) + " requires M <= N (got M=" + std::to_string(m) +
                                        ", N=" + std::to_string(n) + ")");
        break;
      case DistributionKind::DR:
        if (r.is_infinite()) {
          if (m > n) throw ParameterError("DR(inf) needs an injective h, so M <= N");
        } else {
          if (r.value() == 0) throw ParameterError("DR needs r >= 1");
          if (std::min(m, r.value()) > n) throw ParameterError("DR image set of g may exceed N; need min(M, r) <= N");
        }
        break;
      case DistributionKind::SmallRange:
        if (r.is_infinite() || r.value() == 0) throw ParameterError("small-range needs a finite r >= 1");
        break;
      case DistributionKind::HybridChain:
        if (depth == 0) throw ParameterError("hybrid chain depth must be positive");
        if (depth >= 32 || (n << depth) != m) throw ParameterError("hybrid chain requires M = 2^depth * N");
        break;
      case DistributionKind::SetEquality:
        if (case_label < 1 || case_label > 3) throw ParameterError("set-equality case must be 1, 2 or 3");
        if (n < 2 * m) throw ParameterError("set-equality requires codomain >= 2 * domain");
        break;
    }
  }
};

using Sample = std::variant<FunctionTable, SetEqualityInstance, HybridChain>;

namespace detail {

inline std::vector<Point> uniform_images(Rng& rng, std::uint64_t m, std::uint64_t n) {
  std::vector<Point> images(m);
  for (auto& y : images) y = static_cast<Point>(rng.below(n));
  return images;
}

// h o g where h is a uniformly random injection from image(g) into [n]. The
// image set is put in increasing order and the i-th smallest value is sent to
// the i-th entry of a random permutation of [n].
inline std::vector<Point> inject_images(Rng& rng, const std::vector<std::uint64_t>& g, std::uint64_t n) {
  std::vector<std::uint64_t> support(g.begin(), g.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (support.size() > n) throw ParameterError("image set of g is larger than the codomain");
  const std::vector<Point> h = rng.sample_distinct(n, support.size());
  std::vector<Point> images(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto rank = std::lower_bound(support.begin(), support.end(), g[x]) - support.begin();
    images[x] = h[static_cast<std::size_t>(rank)];
  }
  return images;
}

inline FunctionTable sample_dr(const DistributionSpec& s) {
  Rng g_rng(s.seed, "oracles.dr.g");
  Rng h_rng(s.seed, "oracles.dr.h");
  std::vector<std::uint64_t> g(s.domain_size);
  if (s.r.is_infinite()) {
    // g injective: its values are distinct labels, here a random arrangement of [M].
    const auto labels = g_rng.sample_distinct(s.domain_size, s.domain_size);
    std::copy(labels.begin(), labels.end(), g.begin());
  } else {
    for (auto& v : g) v = g_rng.below(s.r.value());
  }
  return {s.domain_size, s.codomain_size, inject_images(h_rng, g, s.codomain_size)};
}

inline FunctionTable sample_small_range(const DistributionSpec& s) {
  Rng g_rng(s.seed, "oracles.small-range.g");
  Rng h_rng(s.seed, "oracles.small-range.h");
  const std::uint64_t r = s.r.value();
  std::vector<Point> h = uniform_images(h_rng, r, s.codomain_size);
  std::vector<Point> images(s.domain_size);
  for (auto& y : images) y = h[g_rng.below(r)];
  return {s.domain_size, s.codomain_size, std::move(images)};
}

inline HybridChain sample_hybrid(const DistributionSpec& s) {
  std::vector<FunctionTable> components;
  components.reserve(s.depth);
  for (std::size_t i = 1; i <= s.depth; ++i) {
    Rng rng(s.seed, "oracles.hybrid.component", i);
    const std::uint64_t dom = s.codomain_size << i;
    const std::uint64_t cod = s.codomain_size << (i - 1);
    components.emplace_back(dom, cod, uniform_images(rng, dom, cod));
  }
  return HybridChain(std::move(components));
}

inline SetEqualityInstance sample_set_equality(const DistributionSpec& s) {
  const std::uint64_t n = s.domain_size;
  const std::uint64_t m = s.codomain_size;
  Rng inner(s.seed, "oracles.set-equality.inner");
  Rng outer(s.seed, "oracles.set-equality.h");
  // f' and g' into the intermediate range, laid out as one array on [2N].
  std::vector<std::uint64_t> inner_images(2 * n);
  switch (s.case_label) {
    case 1: {
      const auto fp = inner.sample_distinct(n, n);
      const auto gp = inner.sample_distinct(n, n);
      std::copy(fp.begin(), fp.end(), inner_images.begin());
      std::copy(gp.begin(), gp.end(), inner_images.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
    case 2:
      for (auto& v : inner_images) v = inner.below(n);
      break;
    default: {
      // r -> infinity: f' and g' injective with disjoint ranges.
      const auto labels = inner.sample_distinct(2 * n, 2 * n);
      std::copy(labels.begin(), labels.end(), inner_images.begin());
      break;
    }
  }
  const std::vector<Point> images = inject_images(outer, inner_images, m);
  SetEqualityInstance inst;
  inst.case_label = s.case_label;
  inst.f = FunctionTable(n, m, std::vector<Point>(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(n)));
  inst.g = FunctionTable(n, m, std::vector<Point>(images.begin() + static_cast<std::ptrdiff_t>(n), images.end()));
  return inst;
}

}  // namespace detail

// Draws one sample from the named distribution. Identical specs (including
// the seed) give identical samples.
inline Sample sample(const DistributionSpec& s) {
  s.validate();
  switch (s.kind) {
    case DistributionKind::Uniform: {
      Rng rng(s.seed, "oracles.uniform");
      return FunctionTable(s.domain_size, s.codomain_size, detail::uniform_images(rng, s.domain_size, s.codomain_size));
    }
    case DistributionKind::Permutation:
    case DistributionKind::Injective: {
      Rng rng(s.seed, "oracles.injective");
      return FunctionTable(s.domain_size, s.codomain_size, rng.sample_distinct(s.codomain_size, s.domain_size));
    }
    case DistributionKind::DR: return detail::sample_dr(s);
    case DistributionKind::SmallRange: return detail::sample_small_range(s);
    case DistributionKind::HybridChain: return detail::sample_hybrid(s);
    case DistributionKind::SetEquality: return detail::sample_set_equality(s);
  }
  throw ParameterError("unknown distribution kind");
}

// Single-table view of any sample: hybrid chains are composed over the
// identity base, set-equality instances are flattened onto [2N].
inline FunctionTable sample_table(const DistributionSpec& s) {
  Sample drawn = sample(s);
  if (auto* t = std::get_if<FunctionTable>(&drawn)) return std::move(*t);
  if (auto* c = std::get_if<HybridChain>(&drawn)) return compose(*c, FunctionTable::identity(c->domain_size()));
  return std::get<SetEqualityInstance>(drawn).combined();
}

}  // namespace qcl

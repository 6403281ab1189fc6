#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"

namespace qcl {

// f_1, ..., f_l with f_i : [2^i N] -> [2^(i-1) N]. The composition
// f_1 o ... o f_l maps [2^l N] onto [N].
class HybridChain {
 public:
  HybridChain() = default;

  explicit HybridChain(std::vector<FunctionTable> components) : components_(std::move(components)) {
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) {
      if (components_[i + 1].codomain_size() != components_[i].domain_size()) {
        throw ParameterError("hybrid chain components " + std::to_string(i + 1) + " and " +
                             std::to_string(i + 2) + " do not compose");
      }
    }
  }

  std::size_t depth() const { return components_.size(); }
  bool empty() const { return components_.empty(); }
  // 1-based, matching the component numbering f_1 ... f_l.
  const FunctionTable& component(std::size_t i) const { return components_.at(i - 1); }
  const std::vector<FunctionTable>& components() const { return components_; }

  std::uint64_t domain_size() const { return components_.back().domain_size(); }
  std::uint64_t codomain_size() const { return components_.front().codomain_size(); }

  // f_1(f_2(...f_l(v)...)) for v in the innermost component's domain.
  Point evaluate(Point v) const {
    for (auto it = components_.rbegin(); it != components_.rend(); ++it) v = (*it)(v);
    return v;
  }

 private:
  std::vector<FunctionTable> components_;
};

// Table of x -> f_1(...f_l(base(x))...).
inline FunctionTable compose(const HybridChain& chain, const FunctionTable& base) {
  if (chain.empty()) return base;
  if (base.codomain_size() != chain.domain_size()) {
    throw DimensionMismatch("base codomain " + std::to_string(base.codomain_size()) +
                            " does not match chain domain " + std::to_string(chain.domain_size()));
  }
  std::vector<Point> images(base.domain_size());
  for (std::uint64_t x = 0; x < base.domain_size(); ++x) images[x] = chain.evaluate(base(x));
  return {base.domain_size(), chain.codomain_size(), std::move(images)};
}

// Stage 0 is the base table; stage i >= 1 is component f_i.
struct ComponentCollision {
  std::size_t stage = 0;
  Point first = 0;
  Point second = 0;

  friend bool operator==(const ComponentCollision&, const ComponentCollision&) = default;
};

// Given a collision (x1, x2) of the composed function, walks the two
// evaluation paths from the base outward and returns the first stage whose
// two (distinct) inputs are sent to the same output.
inline ComponentCollision find_component_collision(const HybridChain& chain, const FunctionTable& base,
                                                   Point x1, Point x2) {
  if (!chain.empty() && base.codomain_size() != chain.domain_size()) {
    throw DimensionMismatch("base codomain does not match chain domain");
  }
  if (x1 >= base.domain_size() || x2 >= base.domain_size()) {
    throw ContractViolation("collision inputs outside the domain");
  }
  if (x1 == x2) throw ContractViolation("collision inputs must be distinct");

  Point a = base(x1);
  Point b = base(x2);
  if (a == b) return {0, x1, x2};
  for (std::size_t i = chain.depth(); i >= 1; --i) {
    const FunctionTable& f = chain.component(i);
    const Point fa = f(a);
    const Point fb = f(b);
    if (fa == fb) return {i, a, b};
    a = fa;
    b = fb;
  }
  throw ContractViolation("inputs are not a collision of the composed function");
}

}  // namespace qcl

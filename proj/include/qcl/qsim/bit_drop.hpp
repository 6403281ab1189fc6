#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/qsim/bht.hpp"
#include "qcl/qsim/statevector.hpp"

namespace qcl::qsim {

// Query access as seen by an adversary for f : [2N'] -> [N']. The adversary
// works on an input register and a response register; a port may carry extra
// ancilla registers that the adversary never touches.
class AdversaryPort {
 public:
  virtual ~AdversaryPort() = default;
  virtual std::uint64_t domain_size() const = 0;
  virtual std::uint64_t response_size() const = 0;
  // Input register uniform, response register |0>, ancillas as the port needs.
  virtual Statevector initial_state() const = 0;
  virtual std::size_t x_register() const = 0;
  virtual std::size_t y_register() const = 0;
  // |x, y> -> |x, y + f(x) mod N'> (inverse: minus).
  virtual void query(Statevector& state, bool inverse) = 0;
  virtual Point classical(Point x) = 0;
  virtual const QueryBudget& budget() const = 0;
};

// Answers queries straight from f.
class DirectPort final : public AdversaryPort {
 public:
  explicit DirectPort(FunctionTable f) : oracle_(std::move(f), QueryConvention::AddMod) {}

  std::uint64_t domain_size() const override { return oracle_.table().domain_size(); }
  std::uint64_t response_size() const override { return oracle_.table().codomain_size(); }
  Statevector initial_state() const override {
    return Statevector::product({Statevector::uniform_factor(domain_size()), Statevector::basis_factor(response_size(), 0)});
  }
  std::size_t x_register() const override { return 0; }
  std::size_t y_register() const override { return 1; }
  void query(Statevector& state, bool inverse) override { apply_query(state, oracle_, 0, 1, budget_, inverse); }
  Point classical(Point x) override {
    budget_.charge();
    return oracle_.table()(x);
  }
  const QueryBudget& budget() const override { return budget_; }

 private:
  OracleGate oracle_;
  QueryBudget budget_;
};

enum class BitDropMode {
  // The dropped bit is written into a qubit held in |+>, which XOR leaves
  // unchanged: one g-query per adversary query.
  PlusState,
  // g is queried into scratch, the low digit is added into the response,
  // and a second g-query uncomputes the scratch.
  Uncompute,
};

// Simulates f = (g with its top output bit dropped) using queries to g,
// where g : [2N'] -> {0,1} x [N'] is laid out as top bit then base-N' digit.
class BitDropPort final : public AdversaryPort {
 public:
  BitDropPort(const FunctionTable& g, BitDropMode mode)
      : oracle_(g, QueryConvention::AddMod, 1), mode_(mode) {
    if (g.codomain_size() % 2 != 0 || g.domain_size() != g.codomain_size()) {
      throw DimensionMismatch("bit-drop needs g : [2N'] -> [2N']");
    }
  }

  std::uint64_t domain_size() const override { return oracle_.table().domain_size(); }
  std::uint64_t response_size() const override { return oracle_.table().codomain_size() / 2; }
  BitDropMode mode() const { return mode_; }

  Statevector initial_state() const override {
    const std::uint64_t n = response_size();
    if (mode_ == BitDropMode::PlusState) {
      return Statevector::product({Statevector::uniform_factor(domain_size()), Statevector::uniform_factor(2),
                                   Statevector::basis_factor(n, 0)});
    }
    return Statevector::product({Statevector::uniform_factor(domain_size()), Statevector::basis_factor(n, 0),
                                 Statevector::basis_factor(2 * n, 0)});
  }
  std::size_t x_register() const override { return 0; }
  std::size_t y_register() const override { return mode_ == BitDropMode::PlusState ? 2 : 1; }

  void query(Statevector& state, bool inverse) override {
    if (mode_ == BitDropMode::PlusState) {
      apply_query(state, oracle_, 0, RegisterRange{1, 2}, budget_, inverse);
      return;
    }
    const std::uint64_t n = response_size();
    apply_query(state, oracle_, 0, 2, budget_);
    state.apply_basis_map([&](std::uint64_t i) {
      const std::uint64_t y = state.digit(i, 1);
      const std::uint64_t d = state.digit(i, 2) % n;
      const std::uint64_t y2 = inverse ? (y + n - d) % n : (y + d) % n;
      return state.with_range_digit(i, RegisterRange{1, 1}, y2);
    });
    apply_query(state, oracle_, 0, 2, budget_, true);
  }

  Point classical(Point x) override {
    budget_.charge();
    return static_cast<Point>(oracle_.table()(x) % response_size());
  }
  const QueryBudget& budget() const override { return budget_; }
  QueryBudget& mutable_budget() { return budget_; }

 private:
  OracleGate oracle_;
  BitDropMode mode_;
  QueryBudget budget_;
};

// BHT-style collision adversary driven entirely through a port: a classical
// table of k images, then `iterations` rounds of (query, phase flip on
// "response is a table image from a fresh input", inverse query, diffusion on
// the input register), then a measured candidate checked with one query.
// The observer sees the state after every gate, before measurement.
struct GroverCollisionAdversary {
  std::size_t table_size = 2;
  std::uint64_t iterations = 1;

  using Observer = std::function<void(const Statevector&)>;

  std::optional<std::pair<Point, Point>> run(AdversaryPort& port, std::uint64_t seed, const Observer& observe = {}) const {
    Rng rng(seed, "qsim.adversary");
    const std::vector<Point> table = rng.sample_distinct(port.domain_size(), table_size);
    std::unordered_map<Point, Point> owner;
    std::vector<bool> in_table(port.domain_size(), false);
    for (Point x : table) {
      in_table[x] = true;
      auto [it, fresh] = owner.emplace(port.classical(x), x);
      if (!fresh) return std::make_pair(it->second, x);
    }
    Statevector state = port.initial_state();
    const std::size_t xr = port.x_register();
    const std::size_t yr = port.y_register();
    auto notify = [&] {
      if (observe) observe(state);
    };
    notify();
    for (std::uint64_t t = 0; t < iterations; ++t) {
      port.query(state, false);
      notify();
      state.apply_phase_flip([&](std::uint64_t i) {
        const auto x = state.digit(i, xr);
        return !in_table[x] && owner.count(static_cast<Point>(state.digit(i, yr))) > 0;
      });
      notify();
      port.query(state, true);
      notify();
      state.apply_diffusion(xr);
      notify();
    }
    const auto x = static_cast<Point>(state.measure(xr, rng));
    const Point y = port.classical(x);
    if (const auto it = owner.find(y); it != owner.end() && it->second != x) return std::make_pair(it->second, x);
    return std::nullopt;
  }
};

struct BitDropResult {
  std::optional<std::pair<Point, Point>> inner_output;
  bool inner_found_f_collision = false;  // instrumentation: inner output collides under f
  CollisionClaim g_claim;
  QueryBudget g_budget;

  bool success() const { return inner_output.has_value() && g_claim.verified; }
};

// Runs the inner adversary against f derived from g and forwards its output
// pair as a collision claim for g, checked with two g-queries.
inline BitDropResult bit_drop_adversary(const GroverCollisionAdversary& inner, const FunctionTable& g,
                                        std::uint64_t seed, BitDropMode mode = BitDropMode::PlusState) {
  BitDropPort port(g, mode);
  BitDropResult result;
  result.inner_output = inner.run(port, seed);
  if (result.inner_output) {
    const auto [x1, x2] = *result.inner_output;
    const std::uint64_t n = port.response_size();
    result.inner_found_f_collision = x1 != x2 && g(x1) % n == g(x2) % n;
    ClassicalOracle g_oracle(g, port.mutable_budget());
    result.g_claim = verify_claim(g_oracle, x1, x2);
  }
  result.g_budget = port.budget();
  return result;
}

// <psi| rho |psi> where rho is `full` traced down to its input and response
// registers and psi is a state on exactly those two registers.
inline double view_fidelity(const Statevector& full, std::size_t x_reg, std::size_t y_reg, const Statevector& view) {
  if (view.register_count() != 2 || view.dim(0) != full.dim(x_reg) || view.dim(1) != full.dim(y_reg)) {
    throw DimensionMismatch("view state does not match the adversary registers");
  }
  std::map<std::uint64_t, Amplitude> overlap;  // keyed by the ancilla part of the index
  const auto amps = full.amplitudes();
  const auto psi = view.amplitudes();
  for (std::uint64_t i = 0; i < full.size(); ++i) {
    if (amps[i] == Amplitude(0.0, 0.0)) continue;
    const std::uint64_t x = full.digit(i, x_reg);
    const std::uint64_t y = full.digit(i, y_reg);
    const std::uint64_t ancilla = full.with_range_digit(full.with_range_digit(i, {x_reg, 1}, 0), {y_reg, 1}, 0);
    overlap[ancilla] += std::conj(psi[x * view.dim(1) + y]) * amps[i];
  }
  double f = 0.0;
  for (const auto& [key, a] : overlap) f += std::norm(a);
  return f;
}

// Minimum, over every gate of the adversary's run, of the fidelity between the
// bit-drop simulation's reduced state and a direct simulation against f.
inline double bit_drop_min_fidelity(const GroverCollisionAdversary& inner, const FunctionTable& g, std::uint64_t seed,
                                    BitDropMode mode = BitDropMode::PlusState) {
  BitDropPort bit_drop(g, mode);
  const std::uint64_t n = bit_drop.response_size();
  std::vector<Point> low(g.domain_size());
  for (std::uint64_t x = 0; x < g.domain_size(); ++x) low[x] = static_cast<Point>(g(x) % n);
  DirectPort direct(FunctionTable(g.domain_size(), n, std::move(low)));

  std::vector<Statevector> reference;
  inner.run(direct, seed, [&](const Statevector& s) { reference.push_back(s); });
  std::size_t step = 0;
  double worst = 1.0;
  inner.run(bit_drop, seed, [&](const Statevector& s) {
    if (step >= reference.size()) throw ContractViolation("bit-drop run took more steps than the direct run");
    worst = std::min(worst, view_fidelity(s, bit_drop.x_register(), bit_drop.y_register(), reference[step]));
    ++step;
  });
  if (step != reference.size()) throw ContractViolation("bit-drop run took fewer steps than the direct run");
  return worst;
}

}  // namespace qcl::qsim

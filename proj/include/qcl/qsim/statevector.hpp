#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/rng.hpp"

namespace qcl::qsim {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

struct SimulatorCaps {
  std::uint64_t max_amplitudes = 1ULL << 22;
};

// Contiguous block of registers read as one mixed-radix digit, first register
// most significant.
struct RegisterRange {
  std::size_t first = 0;
  std::size_t count = 1;
};

// Dense amplitudes over a tensor product of registers with the given
// dimensions. Register 0 is the most significant digit of the basis index.
class Statevector {
 public:
  explicit Statevector(std::vector<std::uint64_t> dims, SimulatorCaps caps = {}) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionMismatch("statevector needs at least one register");
    std::uint64_t size = 1;
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 0;) {
      if (dims_[i] == 0) throw DimensionMismatch("register dimension must be positive");
      strides_[i] = size;
      if (size > caps.max_amplitudes / dims_[i]) {
        throw CapExceeded("statevector would exceed " + std::to_string(caps.max_amplitudes) + " amplitudes");
      }
      size *= dims_[i];
    }
    amps_.assign(size, Amplitude(0.0, 0.0));
    amps_[0] = 1.0;
  }

  // Product state: register i holds the (normalized) amplitudes factors[i].
  static Statevector product(const std::vector<std::vector<Amplitude>>& factors, SimulatorCaps caps = {}) {
    std::vector<std::uint64_t> dims;
    for (const auto& f : factors) dims.push_back(f.size());
    Statevector s(std::move(dims), caps);
    for (std::uint64_t idx = 0; idx < s.size(); ++idx) {
      Amplitude a = 1.0;
      for (std::size_t r = 0; r < factors.size(); ++r) a *= factors[r][s.digit(idx, r)];
      s.amps_[idx] = a;
    }
    return s;
  }

  static std::vector<Amplitude> basis_factor(std::uint64_t dim, std::uint64_t value) {
    std::vector<Amplitude> v(dim, 0.0);
    v.at(value) = 1.0;
    return v;
  }

  static std::vector<Amplitude> uniform_factor(std::uint64_t dim) {
    return std::vector<Amplitude>(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  }

  std::size_t register_count() const { return dims_.size(); }
  std::uint64_t dim(std::size_t reg) const { return dims_.at(reg); }
  const std::vector<std::uint64_t>& dims() const { return dims_; }
  std::uint64_t size() const { return amps_.size(); }

  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }
  Amplitude amplitude(std::span<const std::uint64_t> digits) const { return amps_[index_of(digits)]; }

  std::uint64_t digit(std::uint64_t index, std::size_t reg) const { return (index / strides_[reg]) % dims_[reg]; }

  std::uint64_t range_dim(RegisterRange r) const {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < r.count; ++i) d *= dims_.at(r.first + i);
    return d;
  }
  std::uint64_t range_digit(std::uint64_t index, RegisterRange r) const {
    return (index / strides_[r.first + r.count - 1]) % range_dim(r);
  }
  std::uint64_t with_range_digit(std::uint64_t index, RegisterRange r, std::uint64_t value) const {
    const std::uint64_t stride = strides_[r.first + r.count - 1];
    const std::uint64_t old = range_digit(index, r);
    return index - old * stride + value * stride;
  }

  std::uint64_t index_of(std::span<const std::uint64_t> digits) const {
    if (digits.size() != dims_.size()) throw DimensionMismatch("digit count does not match register count");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= dims_[i]) throw DimensionMismatch("digit outside register dimension");
      idx += digits[i] * strides_[i];
    }
    return idx;
  }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
  }

  // Applies the basis permutation |i> -> |map(i)>. Throws if `map` is not a
  // bijection, so only classical reversible maps get through.
  void apply_basis_map(const std::function<std::uint64_t(std::uint64_t)>& map) {
    std::vector<Amplitude> next(amps_.size(), Amplitude(0.0, 0.0));
    std::vector<bool> hit(amps_.size(), false);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      const std::uint64_t j = map(i);
      if (j >= amps_.size() || hit[j]) throw ContractViolation("basis map is not a permutation");
      hit[j] = true;
      next[j] = amps_[i];
    }
    amps_ = std::move(next);
  }

  // Multiplies by -1 every basis amplitude where `marked` holds.
  void apply_phase_flip(const std::function<bool(std::uint64_t)>& marked) {
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
      if (marked(i)) amps_[i] = -amps_[i];
  }

  // Reflection 2|u><u| - I about the uniform state of register `reg`, applied
  // independently for every setting of the other registers.
  void apply_diffusion(std::size_t reg) {
    const std::uint64_t d = dims_[reg];
    const std::uint64_t stride = strides_[reg];
    const std::uint64_t block = stride * d;
    for (std::uint64_t outer = 0; outer < amps_.size(); outer += block) {
      for (std::uint64_t inner = 0; inner < stride; ++inner) {
        Amplitude mean = 0.0;
        for (std::uint64_t v = 0; v < d; ++v) mean += amps_[outer + inner + v * stride];
        mean /= static_cast<double>(d);
        for (std::uint64_t v = 0; v < d; ++v) {
          Amplitude& a = amps_[outer + inner + v * stride];
          a = 2.0 * mean - a;
        }
      }
    }
  }

  std::vector<double> register_probabilities(std::size_t reg) const {
    std::vector<double> p(dims_.at(reg), 0.0);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) p[digit(i, reg)] += std::norm(amps_[i]);
    return p;
  }

  // Projective measurement of one register; collapses and renormalizes.
  std::uint64_t measure(std::size_t reg, Rng& rng) {
    const std::vector<double> p = register_probabilities(reg);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::uint64_t outcome = p.size() - 1;
    for (std::uint64_t v = 0; v < p.size(); ++v) {
      acc += p[v];
      if (u < acc) {
        outcome = v;
        break;
      }
    }
    const double scale = 1.0 / std::sqrt(p[outcome]);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      amps_[i] = digit(i, reg) == outcome ? amps_[i] * scale : Amplitude(0.0, 0.0);
    }
    return outcome;
  }

 private:
  std::vector<std::uint64_t> dims_;
  std::vector<std::uint64_t> strides_;
  std::vector<Amplitude> amps_;
};

// Oracle invocations consumed; only ever grows.
struct QueryBudget {
  std::uint64_t q = 0;
  void charge(std::uint64_t n = 1) { q += n; }
};

enum class QueryConvention { Xor, AddMod };

// Quantum access to a function table. With Xor the response is XORed into the
// target (codomain must be a power of two). With AddMod the codomain is laid
// out as `top_bits` high bits followed by a base-(N / 2^top_bits) digit: the
// bits are XORed and the digit is added modulo its base.
class OracleGate {
 public:
  OracleGate(FunctionTable table, QueryConvention convention, std::size_t top_bits = 0)
      : table_(std::move(table)), convention_(convention), top_bits_(top_bits) {
    const std::uint64_t n = table_.codomain_size();
    if (convention_ == QueryConvention::Xor) {
      if ((n & (n - 1)) != 0) throw DimensionMismatch("XOR oracle needs a power-of-two codomain");
    } else {
      if (top_bits_ >= 32 || (n >> top_bits_) << top_bits_ != n || (n >> top_bits_) == 0) {
        throw DimensionMismatch("codomain is not 2^top_bits times a digit base");
      }
    }
  }

  const FunctionTable& table() const { return table_; }
  QueryConvention convention() const { return convention_; }
  std::uint64_t digit_base() const { return table_.codomain_size() >> top_bits_; }

  // Target value after one query (or inverse query) with input x.
  std::uint64_t respond(std::uint64_t x, std::uint64_t y, bool inverse = false) const {
    const std::uint64_t v = table_(x);
    if (convention_ == QueryConvention::Xor) return y ^ v;
    const std::uint64_t base = digit_base();
    const std::uint64_t bits = (y / base) ^ (v / base);
    const std::uint64_t d = y % base;
    const std::uint64_t vd = v % base;
    const std::uint64_t digit = inverse ? (d + base - vd) % base : (d + vd) % base;
    return bits * base + digit;
  }

 private:
  FunctionTable table_;
  QueryConvention convention_;
  std::size_t top_bits_;
};

// |x, y> -> |x, y (+) f(x)> on the given input register and target range.
inline void apply_query(Statevector& state, const OracleGate& oracle, std::size_t x_reg, RegisterRange target,
                        QueryBudget& budget, bool inverse = false) {
  if (state.dim(x_reg) != oracle.table().domain_size()) {
    throw DimensionMismatch("input register has dimension " + std::to_string(state.dim(x_reg)) + ", oracle domain is " +
                            std::to_string(oracle.table().domain_size()));
  }
  if (state.range_dim(target) != oracle.table().codomain_size()) {
    throw DimensionMismatch("target register dimension does not match oracle codomain");
  }
  state.apply_basis_map([&](std::uint64_t i) {
    const std::uint64_t x = state.digit(i, x_reg);
    const std::uint64_t y = state.range_digit(i, target);
    return state.with_range_digit(i, target, oracle.respond(x, y, inverse));
  });
  budget.charge();
}

inline void apply_query(Statevector& state, const OracleGate& oracle, std::size_t x_reg, std::size_t y_reg,
                        QueryBudget& budget, bool inverse = false) {
  apply_query(state, oracle, x_reg, RegisterRange{y_reg, 1}, budget, inverse);
}

// Classical query access that charges the shared budget.
class ClassicalOracle {
 public:
  ClassicalOracle(const FunctionTable& table, QueryBudget& budget) : table_(&table), budget_(&budget) {}
  Point operator()(std::uint64_t x) const {
    budget_->charge();
    return (*table_)(x);
  }
  const FunctionTable& table() const { return *table_; }

 private:
  const FunctionTable* table_;
  QueryBudget* budget_;
};

}  // namespace qcl::qsim

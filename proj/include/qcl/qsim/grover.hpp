#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/qsim/statevector.hpp"

namespace qcl::qsim {

// sin^2((2t+1) theta) with sin(theta) = sqrt(marked / space).
inline double grover_success_probability(std::uint64_t marked, std::uint64_t space, std::uint64_t iterations) {
  if (space == 0 || marked == 0) return 0.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(space)));
  const double s = std::sin(static_cast<double>(2 * iterations + 1) * theta);
  return s * s;
}

struct GroverOutcome {
  std::uint64_t index = 0;           // measured basis state of the search register
  bool marked = false;
  double success_probability = 0.0;  // mass on the marked set just before measurement
};

// Amplitude amplification over a search register of `space` basis states,
// starting from the uniform superposition. Each iteration is one phase-flip
// oracle call followed by the diffusion; the oracle call is charged
// `queries_per_iteration` queries. An empty marked set is allowed here: the
// state then never moves and the measurement is uniform.
inline GroverOutcome run_grover(std::uint64_t space, std::span<const std::uint64_t> marked_indices,
                                std::uint64_t iterations, Rng& rng, QueryBudget& budget,
                                std::uint64_t queries_per_iteration = 1, SimulatorCaps caps = {}) {
  if (space == 0) throw SearchError("empty search space");
  Statevector state = Statevector::product({Statevector::uniform_factor(space)}, caps);
  std::vector<bool> is_marked(space, false);
  for (auto i : marked_indices) is_marked.at(i) = true;
  auto amps = state.amplitudes();
  for (std::uint64_t t = 0; t < iterations; ++t) {
    for (auto i : marked_indices) amps[i] = -amps[i];
    budget.charge(queries_per_iteration);
    state.apply_diffusion(0);
  }
  GroverOutcome out;
  for (auto i : marked_indices) out.success_probability += std::norm(amps[i]);
  out.index = state.measure(0, rng);
  out.marked = is_marked[out.index];
  return out;
}

// Grover search for an element of [domain_size] satisfying `marked`.
inline GroverOutcome grover_search(std::uint64_t domain_size, const std::function<bool(std::uint64_t)>& marked,
                                   std::uint64_t iterations, std::uint64_t seed, QueryBudget* budget = nullptr) {
  std::vector<std::uint64_t> marked_indices;
  for (std::uint64_t x = 0; x < domain_size; ++x)
    if (marked(x)) marked_indices.push_back(x);
  if (marked_indices.empty()) throw SearchError("grover search needs at least one marked element");
  Rng rng(seed, "qsim.grover.measure");
  QueryBudget local;
  return run_grover(domain_size, marked_indices, iterations, rng, budget ? *budget : local);
}

}  // namespace qcl::qsim

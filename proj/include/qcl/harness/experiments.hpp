#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"
#include "qcl/exact/rational.hpp"
#include "qcl/harness/stats.hpp"
#include "qcl/oracles/distribution.hpp"
#include "qcl/qsim/bht.hpp"

namespace qcl::harness {

// Query strategies that can be run against a sampled oracle. The first two
// output collisions (or claws for set-equality instances); image-count only
// accepts or rejects.
enum class Strategy { CollisionCheck, ClassicalBirthday, ImageCount };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::CollisionCheck: return "collision-check";
    case Strategy::ClassicalBirthday: return "classical-birthday";
    case Strategy::ImageCount: return "image-count";
  }
  return "unknown";
}

inline Strategy parse_strategy(const std::string& name) {
  if (name == "collision-check" || name == "bht") return Strategy::CollisionCheck;
  if (name == "classical-birthday" || name == "classical") return Strategy::ClassicalBirthday;
  if (name == "image-count") return Strategy::ImageCount;
  throw ParameterError("unknown strategy '" + name + "'");
}

struct TrialOutcome {
  bool accept = false;     // distinguisher verdict ("not the collision-free world")
  bool collision = false;  // a verified collision or claw was produced
  std::uint64_t queries = 0;
};

namespace detail {

inline std::vector<Point> distinct_inputs(std::uint64_t domain, std::uint64_t count, std::uint64_t seed) {
  Rng rng(seed, "harness.classical.inputs");
  return rng.sample_distinct(domain, std::min<std::uint64_t>(count, domain));
}

inline TrialOutcome classical_on_table(const FunctionTable& f, std::uint64_t q, std::uint64_t seed) {
  TrialOutcome out;
  std::unordered_set<Point> seen;
  for (Point x : distinct_inputs(f.domain_size(), q, seed)) {
    ++out.queries;
    if (!seen.insert(f(x)).second) out.collision = true;
  }
  out.accept = out.collision;
  return out;
}

inline TrialOutcome classical_claw(const SetEqualityInstance& inst, std::uint64_t q, std::uint64_t seed) {
  TrialOutcome out;
  const std::uint64_t qf = (q + 1) / 2;
  std::unordered_set<Point> f_images;
  for (Point x : distinct_inputs(inst.f.domain_size(), qf, seed)) {
    ++out.queries;
    f_images.insert(inst.f(x));
  }
  for (Point x : distinct_inputs(inst.g.domain_size(), q - qf, derive_seed(seed, "harness.classical.g", 0))) {
    ++out.queries;
    if (f_images.count(inst.g(x))) out.collision = true;
  }
  out.accept = out.collision;
  return out;
}

// Accepts when q distinct inputs produce at most max(1, q/2) distinct images.
inline TrialOutcome image_count(const FunctionTable& f, std::uint64_t q, std::uint64_t seed) {
  TrialOutcome out;
  std::unordered_set<Point> images;
  const auto inputs = distinct_inputs(f.domain_size(), q, seed);
  for (Point x : inputs) {
    ++out.queries;
    images.insert(f(x));
  }
  out.collision = images.size() < inputs.size();
  out.accept = !inputs.empty() && images.size() <= std::max<std::uint64_t>(1, inputs.size() / 2);
  return out;
}

}  // namespace detail

// One trial: sample the oracle from `spec` (its seed replaced by `table_seed`)
// and run the strategy with budget q.
inline TrialOutcome run_trial(Strategy strategy, const DistributionSpec& spec, std::uint64_t q,
                              std::uint64_t table_seed, std::uint64_t algo_seed) {
  const DistributionSpec s = spec.with_seed(table_seed);
  if (s.kind == DistributionKind::SetEquality) {
    const Sample drawn = sample(s);
    const auto& inst = std::get<SetEqualityInstance>(drawn);
    switch (strategy) {
      case Strategy::CollisionCheck: {
        const auto r = qsim::claw_budgeted(inst.f, inst.g, q, algo_seed);
        return {r.success(), r.success(), r.budget.q};
      }
      case Strategy::ClassicalBirthday: return detail::classical_claw(inst, q, algo_seed);
      case Strategy::ImageCount: return detail::image_count(inst.combined(), q, algo_seed);
    }
  }
  const FunctionTable f = sample_table(s);
  switch (strategy) {
    case Strategy::CollisionCheck: {
      const auto r = qsim::bht_budgeted(f, q, algo_seed);
      return {r.success(), r.success(), r.budget.q};
    }
    case Strategy::ClassicalBirthday: return detail::classical_on_table(f, q, algo_seed);
    case Strategy::ImageCount: return detail::image_count(f, q, algo_seed);
  }
  throw ParameterError("unknown strategy");
}

inline unsigned default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

// Evaluates fn(t) for t in [0, trials) on `workers` threads. Each trial owns
// its randomness, so the result does not depend on the worker count.
template <typename Fn>
auto run_trials(std::uint64_t trials, unsigned workers, Fn&& fn) {
  using Result = decltype(fn(std::uint64_t{0}));
  std::vector<Result> results(trials);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(trials, 1))));
  if (workers == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) results[t] = fn(t);
    return results;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::uint64_t t = begin; t < end; ++t) results[t] = fn(t);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

struct SuccessEstimate {
  std::string strategy;
  DistributionSpec spec;
  std::uint64_t q = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
  Interval ci;
  double ci95 = 0.0;
  std::uint64_t total_queries = 0;
};

// Fraction of trials that produce a verified collision within budget q.
inline SuccessEstimate estimate_success(Strategy strategy, const DistributionSpec& spec, std::uint64_t q,
                                        std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
  if (trials == 0) throw ParameterError("trials must be at least 1");
  if (strategy == Strategy::ImageCount) throw ParameterError("image-count is a distinguisher, not a collision strategy");
  spec.validate();
  const auto outcomes = run_trials(trials, workers, [&](std::uint64_t t) {
    return run_trial(strategy, spec, q, derive_seed(seed, "harness.sample", t), derive_seed(seed, "harness.algorithm", t));
  });
  SuccessEstimate est;
  est.strategy = to_string(strategy);
  est.spec = spec;
  est.q = q;
  est.trials = trials;
  for (const auto& o : outcomes) {
    est.successes += o.collision ? 1 : 0;
    est.total_queries += o.queries;
  }
  est.rate = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.ci = proportion_interval(est.successes, trials);
  est.ci95 = est.ci.halfwidth();
  return est;
}

struct BirthdayBaseline {
  exact::Rational no_collision;
  double value = 1.0;
};

// prod_{i=1}^{q-1} (1 - i/N): chance that q distinct uniform queries see no collision.
inline BirthdayBaseline birthday_baseline(std::uint64_t n, std::uint64_t q) {
  if (n == 0) throw ParameterError("N must be positive");
  if (q > n) throw ParameterError("birthday baseline needs q <= N");
  exact::Rational p = 1;
  for (std::uint64_t i = 1; i < q; ++i) p *= exact::Rational(exact::BigInt(n - i), exact::BigInt(n));
  return {p, exact::to_double(p)};
}

enum class PostProcess { Identity, Negate, AlwaysAccept, AlwaysReject };

inline bool post_process(PostProcess p, bool accept) {
  switch (p) {
    case PostProcess::Identity: return accept;
    case PostProcess::Negate: return !accept;
    case PostProcess::AlwaysAccept: return true;
    case PostProcess::AlwaysReject: return false;
  }
  return accept;
}

struct AdvantageEstimate {
  std::string distinguisher;
  DistributionSpec world_a;
  DistributionSpec world_b;
  std::uint64_t q = 0;
  std::uint64_t trials = 0;  // per world
  std::uint64_t accept_a = 0;
  std::uint64_t accept_b = 0;
  double difference = 0.0;  // p_A - p_B
  double mean = 0.0;        // |p_A - p_B|
  double ci95 = 0.0;
  std::vector<std::uint8_t> transcript_a;  // per-trial verdicts
  std::vector<std::uint8_t> transcript_b;

  double rate_a() const { return static_cast<double>(accept_a) / static_cast<double>(trials); }
  double rate_b() const { return static_cast<double>(accept_b) / static_cast<double>(trials); }

  // Advantage after applying a post-processing map to every verdict.
  double measured_advantage(PostProcess p) const {
    std::uint64_t a = 0, b = 0;
    for (auto v : transcript_a) a += post_process(p, v != 0) ? 1 : 0;
    for (auto v : transcript_b) b += post_process(p, v != 0) ? 1 : 0;
    return std::abs(static_cast<double>(a) - static_cast<double>(b)) / static_cast<double>(trials);
  }
};

inline void require_same_shape(const DistributionSpec& a, const DistributionSpec& b) {
  const bool set_a = a.kind == DistributionKind::SetEquality;
  const bool set_b = b.kind == DistributionKind::SetEquality;
  if (a.domain_size != b.domain_size || a.codomain_size != b.codomain_size || set_a != set_b) {
    throw DimensionMismatch("worlds differ in shape: " + a.name() + " vs " + b.name());
  }
}

// Two-sided distinguishing advantage |Pr[accept | A] - Pr[accept | B]|. Both
// worlds share the per-trial algorithm seed.
inline AdvantageEstimate estimate_advantage(const DistributionSpec& a, const DistributionSpec& b, Strategy distinguisher,
                                            std::uint64_t q, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers = 1) {
  if (trials == 0) throw ParameterError("trials must be at least 1");
  require_same_shape(a, b);
  a.validate();
  b.validate();
  const auto outcomes = run_trials(trials, workers, [&](std::uint64_t t) {
    const std::uint64_t algo = derive_seed(seed, "harness.algorithm", t);
    const TrialOutcome oa = run_trial(distinguisher, a, q, derive_seed(seed, "harness.sample.a", t), algo);
    const TrialOutcome ob = run_trial(distinguisher, b, q, derive_seed(seed, "harness.sample.b", t), algo);
    return std::make_pair(oa.accept, ob.accept);
  });
  AdvantageEstimate est;
  est.distinguisher = to_string(distinguisher);
  est.world_a = a;
  est.world_b = b;
  est.q = q;
  est.trials = trials;
  for (const auto& [va, vb] : outcomes) {
    est.transcript_a.push_back(va ? 1 : 0);
    est.transcript_b.push_back(vb ? 1 : 0);
    est.accept_a += va ? 1 : 0;
    est.accept_b += vb ? 1 : 0;
  }
  est.difference = est.rate_a() - est.rate_b();
  est.mean = std::abs(est.difference);
  est.ci95 = two_sample_halfwidth(est.accept_a, trials, est.accept_b, trials);
  return est;
}

// Built-in world pairs.
enum class WorldPair { UniformVsPermutation, UniformVsSmallRange, DrNVsDrInf, SetEquality };

inline WorldPair parse_pair(const std::string& name) {
  if (name == "uniform-permutation") return WorldPair::UniformVsPermutation;
  if (name == "uniform-small-range") return WorldPair::UniformVsSmallRange;
  if (name == "dr-n-dr-inf") return WorldPair::DrNVsDrInf;
  if (name == "set-equality") return WorldPair::SetEquality;
  throw ParameterError("unknown world pair '" + name + "'");
}

inline std::string to_string(WorldPair p) {
  switch (p) {
    case WorldPair::UniformVsPermutation: return "uniform-permutation";
    case WorldPair::UniformVsSmallRange: return "uniform-small-range";
    case WorldPair::DrNVsDrInf: return "dr-n-dr-inf";
    case WorldPair::SetEquality: return "set-equality";
  }
  return "unknown";
}

// For set-equality, n is the common domain size and the codomain is 2n.
inline std::pair<DistributionSpec, DistributionSpec> make_pair_specs(WorldPair p, std::uint64_t n, std::uint64_t r = 1) {
  switch (p) {
    case WorldPair::UniformVsPermutation: return {DistributionSpec::uniform(n, n), DistributionSpec::permutation(n)};
    case WorldPair::UniformVsSmallRange: return {DistributionSpec::uniform(n, n), DistributionSpec::small_range(n, n, r)};
    case WorldPair::DrNVsDrInf:
      return {DistributionSpec::dr(n, n, RangeSize::finite(n)), DistributionSpec::dr(n, n, RangeSize::infinity())};
    case WorldPair::SetEquality:
      return {DistributionSpec::set_equality(n, 2 * n, 1), DistributionSpec::set_equality(n, 2 * n, 3)};
  }
  throw ParameterError("unknown world pair");
}

struct SweepRow {
  std::uint64_t n = 0;  // the N of the q^3/N law
  std::uint64_t m = 0;
  std::uint64_t q = 0;
  std::uint64_t trials = 0;
  double success_rate = 0.0;  // acceptance in world A
  double ci95 = 0.0;
  double rate_b = 0.0;
  double advantage = 0.0;
  double advantage_ci95 = 0.0;
};

struct SlopeFit {
  std::uint64_t n = 0;  // 0 for the pooled fit over all N
  LineFit line;
};

struct SweepResult {
  std::string experiment;
  std::string distinguisher;
  std::uint64_t seed = 0;
  double regime = 0.2;
  std::vector<SweepRow> rows;
  std::vector<SlopeFit> fits;  // per N, where at least two rows are in the regime
  SlopeFit pooled;             // log(success * N) against log q over all N
  double envelope_fit = 0.0;   // geometric mean of success * N / q^3 over fitted rows
  double envelope_max = 0.0;   // smallest c with success <= c q^3 / N on every fitted row
};

struct SweepConfig {
  WorldPair pair = WorldPair::UniformVsPermutation;
  Strategy distinguisher = Strategy::CollisionCheck;
  std::vector<std::uint64_t> ns;
  std::vector<std::uint64_t> qs;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double regime = 0.2;
};

inline std::string experiment_name(WorldPair p) {
  return p == WorldPair::SetEquality ? "set-equality" : "collision";
}

inline bool in_regime(const SweepRow& r, double regime) { return r.success_rate > 0.0 && r.success_rate < regime; }

// Log-log fits over the rows in the low-success regime, weighting each point
// by the inverse variance of log(success).
inline void fit_sweep(SweepResult& result) {
  std::map<std::uint64_t, std::vector<const SweepRow*>> by_n;
  std::vector<const SweepRow*> all;
  for (const auto& row : result.rows) {
    if (!in_regime(row, result.regime) || row.q == 0) continue;
    by_n[row.n].push_back(&row);
    all.push_back(&row);
  }
  auto fit = [](const std::vector<const SweepRow*>& rows, bool scale_by_n) {
    std::vector<double> x, y, w;
    for (const auto* r : rows) {
      x.push_back(std::log(static_cast<double>(r->q)));
      y.push_back(std::log(r->success_rate * (scale_by_n ? static_cast<double>(r->n) : 1.0)));
      w.push_back(static_cast<double>(r->trials) * r->success_rate / (1.0 - r->success_rate));
    }
    return weighted_line_fit(x, y, w);
  };
  result.fits.clear();
  for (const auto& [n, rows] : by_n) {
    if (rows.size() >= 2) result.fits.push_back({n, fit(rows, false)});
  }
  result.pooled = {0, fit(all, true)};
  double log_sum = 0.0;
  result.envelope_max = 0.0;
  for (const auto* r : all) {
    const double c = r->success_rate * static_cast<double>(r->n) / std::pow(static_cast<double>(r->q), 3.0);
    log_sum += std::log(c);
    result.envelope_max = std::max(result.envelope_max, c);
  }
  result.envelope_fit = all.empty() ? 0.0 : std::exp(log_sum / static_cast<double>(all.size()));
}

// Grid of (N, q) advantage estimates with slope and envelope fits.
inline SweepResult scaling_sweep(const SweepConfig& config) {
  SweepResult result;
  result.experiment = experiment_name(config.pair);
  result.distinguisher = to_string(config.distinguisher);
  result.seed = config.seed;
  result.regime = config.regime;
  std::uint64_t cell = 0;
  for (std::uint64_t n : config.ns) {
    const auto [a, b] = make_pair_specs(config.pair, n);
    for (std::uint64_t q : config.qs) {
      const AdvantageEstimate est = estimate_advantage(a, b, config.distinguisher, q, config.trials,
                                                       derive_seed(config.seed, "harness.sweep.cell", cell++), config.workers);
      SweepRow row;
      row.n = n;
      row.m = a.kind == DistributionKind::SetEquality ? a.codomain_size : a.domain_size;
      row.q = q;
      row.trials = config.trials;
      row.success_rate = est.rate_a();
      row.ci95 = proportion_interval(est.accept_a, est.trials).halfwidth();
      row.rate_b = est.rate_b();
      row.advantage = est.mean;
      row.advantage_ci95 = est.ci95;
      result.rows.push_back(row);
    }
  }
  fit_sweep(result);
  return result;
}

}  // namespace qcl::harness

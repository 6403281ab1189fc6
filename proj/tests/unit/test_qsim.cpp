#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcl/oracles.hpp"
#include "qcl/qsim.hpp"

namespace {

using qcl::DistributionSpec;
using qcl::FunctionTable;
using qcl::Point;
using namespace qcl::qsim;

constexpr double kTol = 1e-12;

TEST(Statevector, ProductAndDigits) {
  const Statevector s = Statevector::product({Statevector::basis_factor(3, 2), Statevector::basis_factor(5, 4)});
  EXPECT_EQ(s.size(), 15u);
  const std::vector<std::uint64_t> d = {2, 4};
  EXPECT_EQ(s.index_of(d), 14u);
  EXPECT_NEAR(std::abs(s.amplitude(d)), 1.0, kTol);
  EXPECT_EQ(s.digit(14, 0), 2u);
  EXPECT_EQ(s.digit(14, 1), 4u);
  EXPECT_EQ(s.range_digit(14, {0, 2}), 14u);
}

TEST(Statevector, CapExceeded) {
  SimulatorCaps caps;
  caps.max_amplitudes = 1000;
  EXPECT_THROW(Statevector({40, 40}, caps), qcl::CapExceeded);
  EXPECT_NO_THROW(Statevector({20, 50}, caps));
}

TEST(Statevector, BasisMapMustBePermutation) {
  Statevector s({4});
  EXPECT_THROW(s.apply_basis_map([](std::uint64_t) { return std::uint64_t{0}; }), qcl::ContractViolation);
}

TEST(ApplyQuery, XorOnZeroWritesImage) {
  const FunctionTable f(4, 4, {3, 1, 0, 2});
  const OracleGate gate(f, QueryConvention::Xor);
  for (Point x = 0; x < 4; ++x) {
    Statevector s = Statevector::product({Statevector::basis_factor(4, x), Statevector::basis_factor(4, 0)});
    QueryBudget budget;
    apply_query(s, gate, 0, 1, budget);
    const std::vector<std::uint64_t> d = {x, f(x)};
    EXPECT_NEAR(std::abs(s.amplitude(d)), 1.0, kTol);
    EXPECT_EQ(budget.q, 1u);
  }
}

TEST(ApplyQuery, XorIsInvolution) {
  const FunctionTable f = qcl::sample_table(DistributionSpec::uniform(8, 8, 3));
  const OracleGate gate(f, QueryConvention::Xor);
  qcl::Rng rng(5, "test");
  Statevector s({8, 8});
  auto amps = s.amplitudes();
  double norm = 0;
  for (auto& a : amps) {
    a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  const std::vector<Amplitude> before(amps.begin(), amps.end());
  QueryBudget budget;
  apply_query(s, gate, 0, 1, budget);
  apply_query(s, gate, 0, 1, budget);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(std::abs(s.amplitudes()[i] - before[i]), 0.0, kTol);
  EXPECT_EQ(budget.q, 2u);
  EXPECT_NEAR(s.norm_squared(), 1.0, kNormTolerance);
}

TEST(ApplyQuery, UniformSuperpositionAmplitudes) {
  const FunctionTable f(6, 5, {4, 0, 4, 2, 1, 1});
  const OracleGate gate(f, QueryConvention::AddMod);
  Statevector s = Statevector::product({Statevector::uniform_factor(6), Statevector::basis_factor(5, 0)});
  QueryBudget budget;
  apply_query(s, gate, 0, 1, budget);
  for (std::uint64_t x = 0; x < 6; ++x) {
    for (std::uint64_t y = 0; y < 5; ++y) {
      const std::vector<std::uint64_t> d = {x, y};
      const double expected = y == f(x) ? 1.0 / std::sqrt(6.0) : 0.0;
      EXPECT_NEAR(s.amplitude(d).real(), expected, kTol);
      EXPECT_NEAR(s.amplitude(d).imag(), 0.0, kTol);
    }
  }
}

TEST(ApplyQuery, AddModInverseUndoes) {
  const FunctionTable f(3, 6, {5, 2, 3});
  const OracleGate gate(f, QueryConvention::AddMod, 1);  // top bit, then base-3 digit
  EXPECT_EQ(gate.digit_base(), 3u);
  for (std::uint64_t x = 0; x < 3; ++x) {
    for (std::uint64_t y = 0; y < 6; ++y) {
      EXPECT_EQ(gate.respond(x, gate.respond(x, y), true), y);
      EXPECT_EQ(gate.respond(x, y) / 3, (y / 3) ^ (f(x) / 3));
    }
  }
}

TEST(ApplyQuery, DimensionErrors) {
  EXPECT_THROW(OracleGate(FunctionTable(2, 3, {0, 1}), QueryConvention::Xor), qcl::DimensionMismatch);
  EXPECT_THROW(OracleGate(FunctionTable(2, 3, {0, 1}), QueryConvention::AddMod, 1), qcl::DimensionMismatch);
  const OracleGate gate(FunctionTable(2, 4, {0, 1}), QueryConvention::Xor);
  Statevector s({3, 4});
  QueryBudget budget;
  EXPECT_THROW(apply_query(s, gate, 0, 1, budget), qcl::DimensionMismatch);
  Statevector t({2, 2});
  EXPECT_THROW(apply_query(t, gate, 0, 1, budget), qcl::DimensionMismatch);
  EXPECT_EQ(budget.q, 0u);
}

TEST(ApplyQuery, NormPreservedOverLongSequences) {
  const FunctionTable f = qcl::sample_table(DistributionSpec::uniform(16, 16, 9));
  const OracleGate gate(f, QueryConvention::AddMod);
  Statevector s = Statevector::product({Statevector::uniform_factor(16), Statevector::basis_factor(16, 3)});
  QueryBudget budget;
  for (int i = 0; i < 200; ++i) {
    apply_query(s, gate, 0, 1, budget, i % 3 == 0);
    s.apply_phase_flip([&](std::uint64_t idx) { return s.digit(idx, 1) % 2 == 1; });
    s.apply_diffusion(0);
  }
  EXPECT_NEAR(s.norm_squared(), 1.0, kNormTolerance);
}

TEST(Grover, ClosedFormExamples) {
  EXPECT_NEAR(grover_success_probability(1, 4, 1), 1.0, 1e-12);
  EXPECT_NEAR(grover_success_probability(2, 8, 1), 1.0, 1e-12);
  EXPECT_NEAR(grover_success_probability(3, 10, 0), 0.3, 1e-12);
}

TEST(Grover, SimulatorMatchesClosedForm) {
  for (std::uint64_t m : {4u, 8u, 13u, 64u}) {
    for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(m, 5); ++k) {
      for (std::uint64_t t = 0; t <= 6; ++t) {
        const auto out = grover_search(m, [&](std::uint64_t x) { return x < k; }, t, 1);
        EXPECT_NEAR(out.success_probability, grover_success_probability(k, m, t), 1e-6)
            << "M=" << m << " k=" << k << " t=" << t;
      }
    }
  }
}

TEST(Grover, SmallExamplesAlwaysSucceed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_TRUE(grover_search(4, [](std::uint64_t x) { return x == 2; }, 1, seed).marked);
    EXPECT_TRUE(grover_search(8, [](std::uint64_t x) { return x == 1 || x == 6; }, 1, seed).marked);
  }
}

TEST(Grover, EmptyMarkedSetThrows) {
  EXPECT_THROW(grover_search(8, [](std::uint64_t) { return false; }, 1, 0), qcl::SearchError);
}

TEST(Grover, ChargesOneQueryPerIteration) {
  QueryBudget budget;
  grover_search(16, [](std::uint64_t x) { return x == 3; }, 3, 0, &budget);
  EXPECT_EQ(budget.q, 3u);
}

TEST(Grover, EmpiricalRateWithinThreeStandardErrors) {
  constexpr int kTrials = 10000;
  const double p = grover_success_probability(1, 16, 1);
  int hits = 0;
  for (int s = 0; s < kTrials; ++s) hits += grover_search(16, [](std::uint64_t x) { return x == 5; }, 1, s).marked;
  const double se = std::sqrt(p * (1 - p) / kTrials);
  EXPECT_NEAR(hits / static_cast<double>(kTrials), p, 3 * se);
}

TEST(Bht, ConstantFunctionFoundInTable) {
  const auto r = bht_collision(FunctionTable::constant(16, 16, 7), 2, 0);
  ASSERT_TRUE(r.success());
  EXPECT_TRUE(r.from_table);
  EXPECT_EQ(r.budget.q, 4u);  // 2 table queries + 2 to verify
}

TEST(Bht, InjectiveNeverClaims) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = qcl::sample_table(DistributionSpec::permutation(32, seed));
    const auto r = bht_collision(f, 3, seed);
    EXPECT_FALSE(r.success());
    EXPECT_FALSE(r.claim.has_value());
  }
}

TEST(Bht, BudgetAccounting) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = qcl::sample_table(DistributionSpec::uniform(64, 64, seed));
    const auto r = bht_collision(f, 4, seed);
    if (r.from_table) {
      EXPECT_EQ(r.budget.q, 4u + 2u);
    } else {
      EXPECT_EQ(r.budget.q, 4 + 2 * r.grover_iterations + 2 * r.rounds);
    }
    if (r.claim && r.claim->verified) {
      EXPECT_NE(r.claim->x1, r.claim->x2);
      EXPECT_EQ(f(r.claim->x1), f(r.claim->x2));
    }
  }
}

TEST(Bht, ExhaustiveSmallPermutationsNoFalsePositives) {
  for (std::uint64_t m = 2; m <= 6; ++m) {
    std::vector<Point> perm(m);
    std::iota(perm.begin(), perm.end(), Point{0});
    do {
      const FunctionTable f(m, m, perm);
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        ASSERT_FALSE(bht_collision(f, 1, seed).success());
        ASSERT_FALSE(subset_restriction_collision(f, m, BruteForceSolver{}, seed).success());
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(Bht, RejectsBadTableSize) {
  EXPECT_THROW(bht_collision(FunctionTable::identity(4), 0, 0), qcl::ParameterError);
  EXPECT_THROW(bht_collision(FunctionTable::identity(4), 4, 0), qcl::ParameterError);
}

TEST(Bht, BudgetedNeverExceedsQ) {
  EXPECT_EQ(split_budget(0).table, 0u);
  EXPECT_EQ(split_budget(1).table, 0u);
  EXPECT_EQ(split_budget(2).table, 1u);
  EXPECT_EQ(split_budget(2).iterations, 0u);
  EXPECT_EQ(split_budget(10).iterations, 3u);
  EXPECT_EQ(split_budget(10).table, 3u);
  for (std::uint64_t q = 0; q <= 20; ++q) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = qcl::sample_table(DistributionSpec::uniform(128, 128, seed));
      const auto r = bht_budgeted(f, q, seed);
      EXPECT_LE(r.budget.q, q);
      if (r.success()) { EXPECT_EQ(f(r.claim->x1), f(r.claim->x2)); }
      if (q < 2) { EXPECT_FALSE(r.success()); }
    }
  }
}

TEST(Bht, TranscriptJson) {
  const auto r = bht_collision(FunctionTable::constant(8, 8, 0), 2, 11);
  const auto j = transcript_json("bht", 11, r);
  EXPECT_EQ(j.at("outcome"), "collision");
  EXPECT_EQ(j.at("queries"), 4);
  EXPECT_EQ(j.at("claim").at("verified"), true);
}

TEST(Subset, BruteForceExamples) {
  const std::vector<Point> distinct = {0, 1, 2};
  EXPECT_FALSE(element_distinctness_bruteforce(distinct).has_value());
  const std::vector<Point> repeat = {5, 3, 5};
  EXPECT_EQ(element_distinctness_bruteforce(repeat), (IndexPair{0, 2}));
}

TEST(Subset, PlantedCollisionOfSizeForty) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    qcl::Rng rng(seed, "test.planted");
    std::vector<Point> images = rng.sample_distinct(1000, 40);
    const auto pos = rng.sample_distinct(40, 2);
    const std::size_t a = std::min(pos[0], pos[1]);
    const std::size_t b = std::max(pos[0], pos[1]);
    images[b] = images[a];
    EXPECT_EQ(element_distinctness_bruteforce(images), (IndexPair{a, b}));
  }
}

TEST(Subset, SubsetWithPlantedDuplicateIsVerified) {
  std::vector<Point> images(64);
  std::iota(images.begin(), images.end(), Point{0});
  images[40] = images[9];
  const FunctionTable f(64, 64, images);
  const auto r = subset_restriction_collision(f, 64, BruteForceSolver{}, 3);
  ASSERT_TRUE(r.success());
  EXPECT_EQ(std::min(r.claim->x1, r.claim->x2), 9u);
  EXPECT_EQ(std::max(r.claim->x1, r.claim->x2), 40u);
  EXPECT_EQ(r.budget.q, 64u + 2u);
}

TEST(Subset, InjectiveFailsAfterRetries) {
  const auto f = qcl::sample_table(DistributionSpec::permutation(256, 1));
  const auto r = subset_restriction_collision(f, default_subset_size(256), BruteForceSolver{}, 1, 5);
  EXPECT_FALSE(r.success());
  EXPECT_EQ(r.attempts.size(), 5u);
  EXPECT_EQ(r.budget.q, 5 * default_subset_size(256));
}

TEST(Subset, Sizes) {
  EXPECT_EQ(default_subset_size(4096), 91u);
  EXPECT_EQ(literal_subset_size(4096), 32u);
  EXPECT_THROW(subset_restriction_collision(FunctionTable::identity(4), 5, BruteForceSolver{}, 0), qcl::ParameterError);
}

TEST(Subset, LyingSolverIsCaughtByVerification) {
  auto liar = [](std::span<const Point>) { return std::optional<IndexPair>(IndexPair{0, 1}); };
  const auto r = subset_restriction_collision(FunctionTable::identity(16), 8, liar, 0, 3);
  EXPECT_FALSE(r.success());
  ASSERT_EQ(r.attempts.size(), 3u);
  EXPECT_TRUE(r.attempts[0].solver_claimed);
  EXPECT_FALSE(r.attempts[0].verified);
}

// g on [4] -> [4] with N' = 2: value = top_bit * 2 + digit.
TEST(BitDrop, SharedTopBitLifts) {
  const FunctionTable g = FunctionTable::constant(4, 4, 3);
  const GroverCollisionAdversary inner;
  for (auto mode : {BitDropMode::PlusState, BitDropMode::Uncompute}) {
    const auto r = bit_drop_adversary(inner, g, 0, mode);
    ASSERT_TRUE(r.inner_output.has_value());
    EXPECT_TRUE(r.inner_found_f_collision);
    EXPECT_TRUE(r.success());
  }
}

TEST(BitDrop, DifferingTopBitFails) {
  const FunctionTable g(4, 4, {0, 2, 1, 3});  // f = g mod 2 = [0, 0, 1, 1], g injective
  const GroverCollisionAdversary inner;
  int f_collisions = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = bit_drop_adversary(inner, g, seed);
    if (r.inner_found_f_collision) ++f_collisions;
    EXPECT_FALSE(r.success());
  }
  EXPECT_GT(f_collisions, 0);
}

TEST(BitDrop, QueryCostPerMode) {
  GroverCollisionAdversary inner;
  inner.table_size = 2;
  inner.iterations = 2;
  int quantum_runs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = qcl::sample_table(DistributionSpec::permutation(8, seed));
    const auto plus = bit_drop_adversary(inner, g, seed, BitDropMode::PlusState);
    const auto unc = bit_drop_adversary(inner, g, seed, BitDropMode::Uncompute);
    const std::uint64_t verify = plus.inner_output ? 2 : 0;
    if (unc.g_budget.q == plus.g_budget.q) {
      // The table already held an f-collision: no quantum queries were made.
      EXPECT_EQ(plus.g_budget.q, 2 + verify);
      continue;
    }
    ++quantum_runs;
    // table (2) + one g-query per adversary query (2 per iteration) + candidate (1) + verify.
    EXPECT_EQ(plus.g_budget.q, 2 + 4 + 1 + verify);
    EXPECT_EQ(unc.g_budget.q, 2 + 8 + 1 + verify);
  }
  EXPECT_GT(quantum_runs, 0);
}

TEST(BitDrop, ReducedStateMatchesDirectRun) {
  for (std::uint64_t np : {2u, 4u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = qcl::sample_table(DistributionSpec::uniform(2 * np, 2 * np, seed));
      GroverCollisionAdversary inner;
      inner.iterations = 2;
      for (auto mode : {BitDropMode::PlusState, BitDropMode::Uncompute}) {
        EXPECT_GE(bit_drop_min_fidelity(inner, g, seed, mode), 1.0 - 1e-9);
      }
    }
  }
}

TEST(BitDrop, FidelityDetectsAWrongView) {
  const auto g = qcl::sample_table(DistributionSpec::uniform(4, 4, 1));
  BitDropPort port(g, BitDropMode::PlusState);
  Statevector full = port.initial_state();
  const Statevector wrong = Statevector::product({Statevector::basis_factor(4, 0), Statevector::basis_factor(2, 1)});
  EXPECT_LT(view_fidelity(full, 0, 2, wrong), 0.5);
  EXPECT_THROW(BitDropPort(FunctionTable(4, 3, {0, 1, 2, 0}), BitDropMode::PlusState), qcl::DimensionMismatch);
}

TEST(RoundUp, ExactPowerUnchanged) {
  const auto f = qcl::sample_table(DistributionSpec::uniform(16, 4, 2));
  EXPECT_EQ(rounded_domain_size(16, 4), 16u);
  EXPECT_EQ(round_up_domain(f, 1), f);
  EXPECT_EQ(rounded_domain_size(3, 4), 4u);
}

TEST(RoundUp, ThreeNBecomesFourN) {
  const auto f = qcl::sample_table(DistributionSpec::uniform(24, 8, 2));
  const auto up = round_up_domain(f, 7);
  ASSERT_EQ(up.domain_size(), 32u);
  EXPECT_EQ(up.codomain_size(), 8u);
  for (Point x = 0; x < 24; ++x) EXPECT_EQ(up(x), f(x));
  EXPECT_EQ(round_up_domain(f, 7), up);
}

TEST(RoundUp, PrefixCollisionsAreOriginalCollisions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = qcl::sample_table(DistributionSpec::uniform(40, 16, seed));
    const auto up = round_up_domain(f, seed);
    ASSERT_EQ(up.domain_size(), 64u);
    const auto hit = element_distinctness_bruteforce(up.images().subspan(0, 40));
    if (hit) { EXPECT_EQ(f(hit->first), f(hit->second)); }
  }
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "qcl/harness.hpp"

namespace {

using qcl::DistributionSpec;
using qcl::RangeSize;
using namespace qcl::harness;

TEST(Stats, WilsonAndNormal) {
  const Interval w = wilson_interval(0, 100);
  EXPECT_DOUBLE_EQ(w.lo, 0.0);
  EXPECT_NEAR(w.hi, 0.037, 1e-3);
  const Interval n = proportion_interval(50, 100);
  EXPECT_NEAR(n.halfwidth(), 1.96 * 0.05, 1e-12);
  // p * n < 10 falls back to Wilson.
  const Interval f = proportion_interval(3, 100);
  EXPECT_DOUBLE_EQ(f.lo, wilson_interval(3, 100).lo);
}

TEST(Stats, TwoSampleHalfwidthFormula) {
  // pooled p = 0.3, t0 = 200, t1 = 300
  const double hw = two_sample_halfwidth(60, 200, 90, 300);
  EXPECT_NEAR(hw, 1.96 * std::sqrt(0.3 * 0.7 * (1.0 / 200 + 1.0 / 300)), 1e-12);
}

TEST(Stats, LineFitRecoversSlope) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 4, 7, 10};
  const std::vector<double> w = {1, 1, 1, 1};
  const LineFit fit = weighted_line_fit(x, y, w);
  EXPECT_NEAR(fit.slope, 3.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  for (double r : fit.residuals) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(Birthday, Examples) {
  EXPECT_EQ(birthday_baseline(10, 1).no_collision, 1);
  EXPECT_EQ(birthday_baseline(4, 2).no_collision, qcl::exact::Rational(3) / 4);
  EXPECT_NEAR(birthday_baseline(365, 23).value, 0.4927, 5e-5);
  EXPECT_THROW(birthday_baseline(4, 5), qcl::ParameterError);
}

TEST(EstimateSuccess, InjectiveIsZero) {
  for (auto s : {Strategy::CollisionCheck, Strategy::ClassicalBirthday}) {
    const auto est = estimate_success(s, DistributionSpec::permutation(64), 12, 300, 1);
    EXPECT_EQ(est.successes, 0u);
  }
}

TEST(EstimateSuccess, ConstantIsOne) {
  for (auto s : {Strategy::CollisionCheck, Strategy::ClassicalBirthday}) {
    const auto est = estimate_success(s, DistributionSpec::dr(64, 64, RangeSize::finite(1)), 2, 300, 1);
    EXPECT_EQ(est.successes, 300u);
  }
}

TEST(EstimateSuccess, ClassicalMatchesBirthday) {
  const std::uint64_t n = 10000;
  for (std::uint64_t q : {50u, 141u}) {
    const auto est = estimate_success(Strategy::ClassicalBirthday, DistributionSpec::uniform(n, n), q, 4000, 5);
    const double p = 1.0 - birthday_baseline(n, q).value;
    EXPECT_NEAR(est.rate, p, 3.0 * standard_error(p, est.trials)) << "q=" << q;
    EXPECT_EQ(est.total_queries, q * est.trials);
  }
}

TEST(EstimateSuccess, WorkerCountDoesNotChangeResult) {
  const auto spec = DistributionSpec::uniform(256, 256);
  const auto a = estimate_success(Strategy::CollisionCheck, spec, 11, 400, 9, 1);
  const auto b = estimate_success(Strategy::CollisionCheck, spec, 11, 400, 9, 4);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_EQ(a.total_queries, b.total_queries);
}

TEST(EstimateSuccess, RejectsBadInput) {
  EXPECT_THROW(estimate_success(Strategy::CollisionCheck, DistributionSpec::uniform(4, 4), 2, 0, 1), qcl::ParameterError);
  EXPECT_THROW(estimate_success(Strategy::ImageCount, DistributionSpec::uniform(4, 4), 2, 10, 1), qcl::ParameterError);
  EXPECT_THROW(estimate_success(Strategy::CollisionCheck, DistributionSpec::injective(5, 4), 2, 10, 1),
               qcl::ParameterError);
  EXPECT_THROW(parse_strategy("oracle"), qcl::ParameterError);
}

TEST(Advantage, IdenticalSpecsAreZero) {
  const auto spec = DistributionSpec::uniform(128, 128);
  const auto est = estimate_advantage(spec, spec, Strategy::CollisionCheck, 12, 2000, 3);
  EXPECT_LE(est.mean, est.ci95);
}

TEST(Advantage, ConstantDetectedByImageCount) {
  const auto est = estimate_advantage(DistributionSpec::uniform(64, 64), DistributionSpec::small_range(64, 64, 1),
                                      Strategy::ImageCount, 2, 2000, 4);
  EXPECT_GT(est.mean, 0.9);
}

TEST(Advantage, DrNVersusUniformIsZeroWithinCi) {
  for (auto s : {Strategy::CollisionCheck, Strategy::ClassicalBirthday, Strategy::ImageCount}) {
    const auto est = estimate_advantage(DistributionSpec::dr(4, 4, RangeSize::finite(4)), DistributionSpec::uniform(4, 4),
                                        s, 3, 4000, 8);
    EXPECT_LE(est.mean, est.ci95 * 1.5) << to_string(s);
  }
}

TEST(Advantage, PostProcessingNeverHelps) {
  const auto est = estimate_advantage(DistributionSpec::uniform(64, 64), DistributionSpec::permutation(64),
                                      Strategy::ClassicalBirthday, 10, 1000, 6);
  const double base = est.measured_advantage(PostProcess::Identity);
  EXPECT_DOUBLE_EQ(base, est.mean);
  for (auto p : {PostProcess::Negate, PostProcess::AlwaysAccept, PostProcess::AlwaysReject}) {
    EXPECT_LE(est.measured_advantage(p), base + 1e-15);
  }
  EXPECT_LE(est.mean, 1.0);
}

TEST(Advantage, CiMatchesPooledFormula) {
  const auto est = estimate_advantage(DistributionSpec::uniform(64, 64), DistributionSpec::permutation(64),
                                      Strategy::ClassicalBirthday, 10, 1000, 6);
  const double p = static_cast<double>(est.accept_a + est.accept_b) / 2000.0;
  EXPECT_NEAR(est.ci95, 1.96 * std::sqrt(p * (1 - p) * (2.0 / 1000)), 1e-12);
}

TEST(Advantage, ShapeMismatch) {
  EXPECT_THROW(estimate_advantage(DistributionSpec::uniform(8, 8), DistributionSpec::uniform(8, 16),
                                  Strategy::CollisionCheck, 2, 10, 1),
               qcl::DimensionMismatch);
}

TEST(Advantage, UniformVersusPermutationIsPositive) {
  const auto est = estimate_advantage(DistributionSpec::uniform(256, 256), DistributionSpec::permutation(256),
                                      Strategy::CollisionCheck, 12, 3000, 10);
  EXPECT_GT(est.mean, est.ci95);
  EXPECT_EQ(est.accept_b, 0u);
}

TEST(Sweep, ZeroQueryRowsAreZero) {
  SweepConfig cfg;
  cfg.ns = {64};
  cfg.qs = {0, 1};
  cfg.trials = 200;
  const auto r = scaling_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) EXPECT_EQ(row.success_rate, 0.0);
}

TEST(Sweep, FitOnSyntheticCubic) {
  SweepResult r;
  r.regime = 0.2;
  for (std::uint64_t n : {1000u, 2000u}) {
    for (std::uint64_t q : {2u, 3u, 4u}) {
      SweepRow row;
      row.n = n;
      row.q = q;
      row.trials = 1000;
      row.success_rate = 0.5 * std::pow(q, 3.0) / static_cast<double>(n);
      r.rows.push_back(row);
    }
  }
  fit_sweep(r);
  ASSERT_EQ(r.fits.size(), 2u);
  for (const auto& f : r.fits) EXPECT_NEAR(f.line.slope, 3.0, 1e-9);
  EXPECT_NEAR(r.pooled.line.slope, 3.0, 1e-9);
  EXPECT_NEAR(r.envelope_fit, 0.5, 1e-9);
  EXPECT_NEAR(r.envelope_max, 0.5, 1e-9);
}

TEST(Report, CsvIsDeterministic) {
  SweepConfig cfg;
  cfg.ns = {64, 128};
  cfg.qs = {5, 8};
  cfg.trials = 300;
  cfg.seed = 77;
  const std::string a = sweep_csv(scaling_sweep(cfg));
  cfg.workers = 3;
  const std::string b = sweep_csv(scaling_sweep(cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "experiment,N,M,q,trials,success_rate,ci95,distinguisher,seed");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
}

TEST(Report, CsvLineFormat) {
  EXPECT_EQ(csv_line("collision", 256, 256, 8, 1000, 0.0123456789, 0.5, "collision-check", 3),
            "collision,256,256,8,1000,0.012346,0.500000,collision-check,3\n");
}

TEST(Pairs, ParseAndShapes) {
  for (auto p : {WorldPair::UniformVsPermutation, WorldPair::UniformVsSmallRange, WorldPair::DrNVsDrInf,
                 WorldPair::SetEquality}) {
    EXPECT_EQ(parse_pair(to_string(p)), p);
    const auto [a, b] = make_pair_specs(p, 16, 2);
    EXPECT_NO_THROW(require_same_shape(a, b));
    a.validate();
    b.validate();
  }
  EXPECT_THROW(parse_pair("nope"), qcl::ParameterError);
}

}  // namespace

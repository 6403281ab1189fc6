#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qcl/harness.hpp"
#include "qcl/plot/svg.hpp"

namespace {

using namespace qcl::harness;

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

nlohmann::json pinned_sweep() {
  SweepConfig cfg;
  cfg.ns = {64, 128};
  cfg.qs = {3, 4, 5, 6, 8};
  cfg.trials = 400;
  cfg.seed = 2024;
  return sweep_json(scaling_sweep(cfg));
}

TEST(Plot, EmptyReportIsNoOp) {
  EXPECT_FALSE(qcl::plot::emit_plot(nlohmann::json::object()).has_value());
  EXPECT_FALSE(qcl::plot::emit_plot({{"rows", nlohmann::json::array()}}).has_value());
}

TEST(Plot, SingleRowHasPointButNoFit) {
  const nlohmann::json report = {{"kind", "sweep"},
                                 {"envelope_fit", 0.5},
                                 {"rows", {{{"N", 256}, {"q", 8}, {"success_rate", 0.1}}}}};
  const auto svg = qcl::plot::emit_plot(report);
  ASSERT_TRUE(svg.has_value());
  EXPECT_EQ(count(*svg, "r=\"3\""), 1u);
  EXPECT_EQ(count(*svg, "<path"), 0u);
}

TEST(Plot, OneSeriesPerN) {
  const auto svg = qcl::plot::emit_plot(pinned_sweep());
  ASSERT_TRUE(svg.has_value());
  EXPECT_EQ(count(*svg, ">N=64<"), 1u);
  EXPECT_EQ(count(*svg, ">N=128<"), 1u);
  EXPECT_EQ(count(*svg, "<path"), 2u);
}

TEST(Plot, GoldenFile) {
  const std::string svg = *qcl::plot::emit_plot(pinned_sweep());
  const std::string path = std::string(QCL_GOLDEN_DIR) + "/sweep_small.svg";
  if (std::getenv("QCL_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path, std::ios::binary) << svg;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in.good()) << "missing golden file " << path;
  std::stringstream expected;
  expected << in.rdbuf();
  EXPECT_EQ(svg, expected.str());
}

}  // namespace

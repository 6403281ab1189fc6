#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qcl/harness/experiments.hpp"

namespace qcl::harness {

inline constexpr const char* kCsvHeader = "experiment,N,M,q,trials,success_rate,ci95,distinguisher,seed\n";

inline std::string csv_line(const std::string& experiment, std::uint64_t n, std::uint64_t m, std::uint64_t q,
                            std::uint64_t trials, double rate, double ci95, const std::string& distinguisher,
                            std::uint64_t seed) {
  return fmt::format("{},{},{},{},{},{:.6f},{:.6f},{},{}\n", experiment, n, m, q, trials, rate, ci95, distinguisher,
                     seed);
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = kCsvHeader;
  for (const auto& row : r.rows) {
    out += csv_line(r.experiment, row.n, row.m, row.q, row.trials, row.success_rate, row.ci95, r.distinguisher, r.seed);
  }
  return out;
}

inline std::string success_csv(const std::string& experiment, const SuccessEstimate& e, std::uint64_t seed) {
  return std::string(kCsvHeader) + csv_line(experiment, e.spec.codomain_size, e.spec.domain_size, e.q, e.trials, e.rate,
                                            e.ci95, e.strategy, seed);
}

// success_rate holds the advantage |p_A - p_B| and ci95 its half-width.
inline std::string advantage_csv(const std::string& experiment, const AdvantageEstimate& e, std::uint64_t seed) {
  return std::string(kCsvHeader) + csv_line(experiment, e.world_a.codomain_size, e.world_a.domain_size, e.q, e.trials,
                                            e.mean, e.ci95, e.distinguisher, seed);
}

inline nlohmann::json fit_json(const SlopeFit& f) {
  return {{"N", f.n},
          {"slope", f.line.defined ? nlohmann::json(f.line.slope) : nlohmann::json()},
          {"slope_se", f.line.defined ? nlohmann::json(f.line.slope_se) : nlohmann::json()},
          {"intercept", f.line.intercept},
          {"points", f.line.points},
          {"residuals", f.line.residuals}};
}

inline nlohmann::json sweep_json(const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"N", row.n},
                    {"M", row.m},
                    {"q", row.q},
                    {"trials", row.trials},
                    {"success_rate", row.success_rate},
                    {"ci95", row.ci95},
                    {"rate_b", row.rate_b},
                    {"advantage", row.advantage},
                    {"advantage_ci95", row.advantage_ci95}});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits) fits.push_back(fit_json(f));
  return {{"kind", "sweep"},
          {"experiment", r.experiment},
          {"distinguisher", r.distinguisher},
          {"seed", r.seed},
          {"regime", r.regime},
          {"rows", rows},
          {"fits", fits},
          {"pooled_fit", fit_json(r.pooled)},
          {"envelope_fit", r.envelope_fit},
          {"envelope_max", r.envelope_max},
          {"envelope_note", "fitted constant c in success ~ c q^3 / N; not a proven bound"}};
}

inline nlohmann::json advantage_json(const AdvantageEstimate& e) {
  return {{"kind", "advantage"},
          {"distinguisher", e.distinguisher},
          {"world_a", e.world_a.name()},
          {"world_b", e.world_b.name()},
          {"N", e.world_a.codomain_size},
          {"M", e.world_a.domain_size},
          {"q", e.q},
          {"trials", e.trials},
          {"accept_a", e.accept_a},
          {"accept_b", e.accept_b},
          {"advantage", e.mean},
          {"difference", e.difference},
          {"ci95", e.ci95}};
}

}  // namespace qcl::harness

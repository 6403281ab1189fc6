// qcl: command-line front end for the collision lab.
//
//   qcl sample --kind dr --r 1 --m 4 --n 4 --seed 7
//   qcl verify-lemma --n 4 --k 2 --rs 1..8
//   qcl run-bht --n 256 --k 7 --trials 200
//   qcl run-subset --n 4096 --trials 2000
//   qcl advantage --pair uniform-permutation --n 256 --q 12
//   qcl sweep --pair uniform-permutation --ns 256,512 --qs 2..12 --plot sweep.svg
//   qcl report --input sweep.json --plot sweep.svg
//   qcl run --config experiment.json
//
// Every experiment subcommand accepts --config FILE (a JSON object whose keys
// are option names); flags given on the command line win over file values.
// Exit codes: 0 ok, 1 certificate failure, 2 validation, 3 cap exceeded,
// 4 internal error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qcl/exact.hpp"
#include "qcl/harness.hpp"
#include "qcl/oracles.hpp"
#include "qcl/plot/svg.hpp"
#include "qcl/qsim.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;
constexpr int kExitInternal = 4;

// Every option any subcommand uses. Subcommands bind the subset they need.
struct Options {
  // distribution
  std::string kind = "uniform";
  std::uint64_t m = 0;  // 0: same as n
  std::uint64_t n = 16;
  std::string r = "inf";
  std::size_t depth = 1;
  int case_label = 1;
  // run control
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  unsigned workers = qcl::harness::default_workers();
  // lemma
  std::size_t k = 0;
  std::string rs = "1..10";
  std::uint64_t max_n = qcl::exact::EnumerationCaps{}.max_n;
  std::uint64_t max_r = qcl::exact::EnumerationCaps{}.max_r;
  // algorithms
  std::uint64_t subset_size = 0;
  bool literal = false;
  std::size_t attempts = 1;
  std::string pair = "uniform-permutation";
  std::string distinguisher = "collision-check";
  std::uint64_t q = 8;
  std::string ns = "256,512,1024";
  std::string qs = "2..12";
  double regime = 0.2;
  // io
  std::string input;
  std::string csv_path;
  std::string out_path;
  std::string plot_path;
  std::string transcripts_path;
  bool json_mode = false;
};

struct Outcome {
  json report = json::object();
  std::string csv;
  std::string summary;
  int exit_code = kExitOk;
};

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dots));
        const auto hi = std::stoull(item.substr(dots + 2));
        if (hi < lo) throw qcl::ParameterError("empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const qcl::ParameterError*>(&e)) throw;
      throw qcl::ParameterError("cannot parse '" + item + "' as a number or a..b range");
    }
  }
  if (out.empty()) throw qcl::ParameterError("empty list '" + text + "'");
  return out;
}

qcl::RangeSize parse_range_size(const std::string& text) {
  if (text == "inf" || text == "infinity") return qcl::RangeSize::infinity();
  try {
    return qcl::RangeSize::finite(std::stoull(text));
  } catch (const std::logic_error&) {
    throw qcl::ParameterError("r must be a positive integer or 'inf', got '" + text + "'");
  }
}

qcl::DistributionSpec spec_from(const Options& o) {
  using K = qcl::DistributionKind;
  const std::uint64_t m = o.m == 0 ? o.n : o.m;
  const std::map<std::string, K> kinds = {{"uniform", K::Uniform},         {"permutation", K::Permutation},
                                          {"injective", K::Injective},     {"dr", K::DR},
                                          {"small-range", K::SmallRange},  {"hybrid", K::HybridChain},
                                          {"set-equality", K::SetEquality}};
  const auto it = kinds.find(o.kind);
  if (it == kinds.end()) throw qcl::ParameterError("unknown distribution kind '" + o.kind + "'");
  qcl::DistributionSpec s = qcl::DistributionSpec::make(it->second, m, o.n, o.seed);
  switch (it->second) {
    case K::DR:
    case K::SmallRange: s.r = parse_range_size(o.r); break;
    case K::HybridChain:
      s.depth = o.depth;
      if (o.m == 0 && o.depth < 32) s.domain_size = o.n << o.depth;
      break;
    case K::SetEquality:
      // --n is the common domain size; the codomain defaults to 2n.
      s.case_label = o.case_label;
      s.domain_size = o.n;
      s.codomain_size = o.m == 0 ? 2 * o.n : o.m;
      break;
    default: break;
  }
  s.validate();
  return s;
}

qcl::exact::EnumerationCaps caps_from(const Options& o) {
  qcl::exact::EnumerationCaps caps;
  caps.max_n = o.max_n;
  caps.max_r = o.max_r;
  return caps;
}

std::string rate_line(const std::string& what, std::uint64_t hits, std::uint64_t trials) {
  const auto ci = qcl::harness::proportion_interval(hits, trials);
  return fmt::format("{}: {}/{} = {:.4f} (95% CI [{:.4f}, {:.4f}])\n", what, hits, trials,
                     static_cast<double>(hits) / static_cast<double>(trials), ci.lo, ci.hi);
}

Outcome cmd_sample(const Options& o) {
  const qcl::DistributionSpec spec = spec_from(o);
  const qcl::Sample drawn = qcl::sample(spec);
  Outcome out;
  if (const auto* t = std::get_if<qcl::FunctionTable>(&drawn)) {
    out.report = *t;
  } else if (const auto* s = std::get_if<qcl::SetEqualityInstance>(&drawn)) {
    out.report = *s;
  } else {
    const auto& chain = std::get<qcl::HybridChain>(drawn);
    json comps = json::array();
    for (const auto& c : chain.components()) comps.push_back(c);
    out.report = {{"components", comps}, {"table", qcl::compose(chain, qcl::FunctionTable::identity(chain.domain_size()))}};
  }
  out.summary = out.report.dump() + "\n";
  return out;
}

Outcome cmd_verify_lemma(const Options& o) {
  if (o.k == 0) throw qcl::ParameterError("--k must be at least 1");
  const auto caps = caps_from(o);
  qcl::exact::DrModel model(o.n, caps);
  std::vector<std::uint64_t> held_out;
  for (auto r : parse_list(o.rs)) {
    if (r == 0) throw qcl::ParameterError("r values must be positive");
    if (r > o.k) held_out.push_back(r);
  }
  const auto sets = qcl::exact::all_constraint_sets(o.n, o.k);
  if (sets.empty()) throw qcl::ParameterError("no constraint sets with k distinct points in [N]");
  json certs = json::array();
  std::uint64_t passed = 0;
  for (const auto& c : sets) {
    const auto cert = qcl::exact::certify_degree_bound(model, c, held_out);
    passed += cert.pass ? 1 : 0;
    if (o.json_mode || !cert.pass) certs.push_back(cert);
  }
  Outcome out;
  const bool ok = passed == sets.size();
  out.report = {{"kind", "verify-lemma"}, {"N", o.n},   {"k", o.k},           {"held_out_rs", held_out},
                {"constraint_sets", sets.size()},     {"passed", passed},   {"pass", ok},
                {"certificates", certs}};
  out.csv = std::string(qcl::harness::kCsvHeader) +
            qcl::harness::csv_line("verify-lemma", o.n, o.n, o.k, sets.size(),
                                   static_cast<double>(passed) / static_cast<double>(sets.size()), 0.0, "exact", 0);
  out.summary = fmt::format("degree <= k-1 certificates at N={}, k={}: {}/{} pass ({})\n", o.n, o.k, passed,
                            sets.size(), ok ? "PASS" : "FAIL");
  out.exit_code = ok ? kExitOk : kExitCertificate;
  return out;
}

Outcome cmd_run_bht(const Options& o) {
  const qcl::DistributionSpec spec = spec_from(o);
  const std::uint64_t m = spec.kind == qcl::DistributionKind::SetEquality ? 2 * spec.domain_size : spec.domain_size;
  const std::size_t k = o.k != 0 ? o.k : static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(m))));
  const auto results = qcl::harness::run_trials(o.trials, o.workers, [&](std::uint64_t t) {
    const auto f = qcl::sample_table(spec.with_seed(qcl::derive_seed(o.seed, "harness.sample", t)));
    return qcl::qsim::bht_collision(f, k, qcl::derive_seed(o.seed, "harness.algorithm", t));
  });
  std::uint64_t hits = 0, queries = 0;
  std::string lines;
  for (std::uint64_t t = 0; t < results.size(); ++t) {
    hits += results[t].success() ? 1 : 0;
    queries += results[t].budget.q;
    json tr = qcl::qsim::transcript_json("bht", qcl::derive_seed(o.seed, "harness.algorithm", t), results[t]);
    tr["trial"] = t;
    lines += tr.dump() + "\n";
  }
  if (!o.transcripts_path.empty()) std::ofstream(o.transcripts_path, std::ios::binary) << lines;
  const auto ci = qcl::harness::proportion_interval(hits, o.trials);
  Outcome out;
  out.report = {{"kind", "run-bht"},  {"distribution", spec.name()}, {"M", m}, {"N", spec.codomain_size},
                {"table_size", k},    {"trials", o.trials},         {"successes", hits},
                {"success_rate", static_cast<double>(hits) / static_cast<double>(o.trials)},
                {"ci95", ci.halfwidth()}, {"total_queries", queries}};
  out.csv = std::string(qcl::harness::kCsvHeader) +
            qcl::harness::csv_line("bht", spec.codomain_size, m, k, o.trials,
                                   static_cast<double>(hits) / static_cast<double>(o.trials), ci.halfwidth(), "bht", o.seed);
  out.summary = rate_line("verified collisions", hits, o.trials) +
                fmt::format("table size {}, mean queries {:.2f}\n", k,
                            static_cast<double>(queries) / static_cast<double>(o.trials));
  return out;
}

Outcome cmd_run_subset(const Options& o) {
  const qcl::DistributionSpec spec = spec_from(o);
  const std::uint64_t size = o.subset_size != 0 ? o.subset_size
                             : o.literal        ? qcl::qsim::literal_subset_size(spec.codomain_size)
                                                : qcl::qsim::default_subset_size(spec.codomain_size);
  const auto results = qcl::harness::run_trials(o.trials, o.workers, [&](std::uint64_t t) {
    const auto f = qcl::sample_table(spec.with_seed(qcl::derive_seed(o.seed, "harness.sample", t)));
    return qcl::qsim::subset_restriction_collision(f, size, qcl::qsim::BruteForceSolver{},
                                                   qcl::derive_seed(o.seed, "harness.algorithm", t), o.attempts);
  });
  std::uint64_t hits = 0, exactly_one = 0, queries = 0;
  for (const auto& r : results) {
    hits += r.success() ? 1 : 0;
    exactly_one += r.attempts.front().colliding_pairs == 1 ? 1 : 0;
    queries += r.budget.q;
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(o.trials);
  const double one_rate = static_cast<double>(exactly_one) / static_cast<double>(o.trials);
  const double lambda = static_cast<double>(size) * static_cast<double>(size - 1) / 2.0 /
                        static_cast<double>(spec.codomain_size);
  const auto ci = qcl::harness::proportion_interval(hits, o.trials);
  Outcome out;
  out.report = {{"kind", "run-subset"},
                {"distribution", spec.name()},
                {"M", spec.domain_size},
                {"N", spec.codomain_size},
                {"subset_size", size},
                {"literal_subset_size", qcl::qsim::literal_subset_size(spec.codomain_size)},
                {"attempts", o.attempts},
                {"trials", o.trials},
                {"success_rate", rate},
                {"ci95", ci.halfwidth()},
                {"exactly_one_collision_rate", one_rate},
                {"poisson_lambda", lambda},
                {"poisson_exactly_one", lambda * std::exp(-lambda)},
                {"total_queries", queries}};
  out.csv = std::string(qcl::harness::kCsvHeader) +
            qcl::harness::csv_line("subset", spec.codomain_size, spec.domain_size, size, o.trials, rate, ci.halfwidth(),
                                   "brute-force", o.seed);
  out.summary = rate_line("verified collisions", hits, o.trials) +
                fmt::format("subset size {}: exactly-one-collision rate {:.4f} (Poisson {:.4f}, lambda {:.3f})\n", size,
                            one_rate, lambda * std::exp(-lambda), lambda);
  return out;
}

Outcome cmd_advantage(const Options& o) {
  const auto pair = qcl::harness::parse_pair(o.pair);
  const auto strategy = qcl::harness::parse_strategy(o.distinguisher);
  const qcl::RangeSize r = parse_range_size(o.r == "inf" ? "1" : o.r);
  const auto [a, b] = qcl::harness::make_pair_specs(pair, o.n, r.value());
  const auto est = qcl::harness::estimate_advantage(a, b, strategy, o.q, o.trials, o.seed, o.workers);
  Outcome out;
  out.report = qcl::harness::advantage_json(est);
  out.report["pair"] = qcl::harness::to_string(pair);
  out.report["rows"] = json::array({{{"N", o.n}, {"q", o.q}, {"advantage", est.mean}, {"success_rate", est.rate_a()}}});
  out.csv = qcl::harness::advantage_csv("advantage-" + qcl::harness::to_string(pair), est, o.seed);
  out.summary = fmt::format("{} vs {} with {} at q={}: p_A={:.4f} p_B={:.4f} advantage {:.4f} +/- {:.4f}\n",
                            a.name(), b.name(), est.distinguisher, o.q, est.rate_a(), est.rate_b(), est.mean, est.ci95);
  return out;
}

Outcome cmd_sweep(const Options& o) {
  qcl::harness::SweepConfig cfg;
  cfg.pair = qcl::harness::parse_pair(o.pair);
  cfg.distinguisher = qcl::harness::parse_strategy(o.distinguisher);
  cfg.ns = parse_list(o.ns);
  cfg.qs = parse_list(o.qs);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.regime = o.regime;
  const auto result = qcl::harness::scaling_sweep(cfg);
  Outcome out;
  out.report = qcl::harness::sweep_json(result);
  out.report["pair"] = o.pair;
  out.csv = qcl::harness::sweep_csv(result);
  auto slope_text = [](const qcl::harness::LineFit& f) {
    if (!f.defined) return fmt::format("n/a ({} points, need two distinct q)", f.points);
    return fmt::format("{:.3f} +/- {:.3f} ({} points)", f.slope, 1.96 * f.slope_se, f.points);
  };
  out.summary = fmt::format("pooled slope {}; fitted envelope c = {:.4f}\n", slope_text(result.pooled.line),
                            result.envelope_fit);
  for (const auto& f : result.fits) out.summary += fmt::format("  N={}: slope {}\n", f.n, slope_text(f.line));
  return out;
}

Outcome cmd_report(const Options& o) {
  if (o.input.empty()) throw qcl::ParameterError("--input is required");
  std::ifstream in(o.input);
  if (!in) throw qcl::ParameterError("cannot read " + o.input);
  json report;
  try {
    report = json::parse(in);
  } catch (const json::parse_error& e) {
    throw qcl::ParameterError(o.input + ": " + e.what());
  }
  Outcome out;
  out.report = {{"kind", "report"}, {"input", o.input}};
  const auto svg = qcl::plot::emit_plot(report);
  if (!svg) {
    std::cerr << "warning: " << o.input << " has no plottable rows; nothing written\n";
    out.report["plot"] = nullptr;
    return out;
  }
  const std::string path = o.plot_path.empty() ? "plot.svg" : o.plot_path;
  std::ofstream(path, std::ios::binary) << *svg;
  out.report["plot"] = path;
  out.summary = "wrote " + path + "\n";
  return out;
}

// Prepends `--key value` pairs from a JSON config to the argument list so that
// later command-line flags take precedence.
std::vector<std::string> config_args(const json& cfg) {
  std::vector<std::string> args;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "experiment" || key == "config") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      text = value.is_string() ? value.get<std::string>() : value.dump();
    }
    args.push_back(flag);
    args.push_back(text);
  }
  return args;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qcl::ParameterError("cannot read config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw qcl::ParameterError(path + ": " + e.what());
  }
  if (cfg.contains("config") && cfg["config"].is_object()) cfg = cfg["config"];  // a report's echo
  if (!cfg.is_object()) throw qcl::ParameterError(path + ": config must be a JSON object");
  return cfg;
}

// Rewrites argv so that `sub ... --config F ...` and `run --config F` become
// plain `sub <config flags> <explicit flags>`.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::set<std::string>& subcommands) {
  if (args.size() < 2) return args;
  std::string sub = args[1];
  std::vector<std::string> rest(args.begin() + 2, args.end());
  std::optional<std::string> config_path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == "--config" && i + 1 < rest.size()) {
      config_path = rest[++i];
    } else if (rest[i].rfind("--config=", 0) == 0) {
      config_path = rest[i].substr(9);
    } else {
      kept.push_back(rest[i]);
    }
  }
  if (!config_path) return args;
  const json cfg = read_config(*config_path);
  if (sub == "run") {
    if (!cfg.contains("experiment") || !cfg["experiment"].is_string()) {
      throw qcl::ParameterError(*config_path + ": missing \"experiment\"");
    }
    sub = cfg["experiment"].get<std::string>();
    if (sub == "run" || !subcommands.count(sub)) throw qcl::ParameterError("unknown experiment '" + sub + "'");
  }
  std::vector<std::string> out = {args[0], sub};
  for (auto& a : config_args(cfg)) out.push_back(std::move(a));
  for (auto& a : kept) out.push_back(std::move(a));
  return out;
}

void add_spec_options(CLI::App* app, Options& o) {
  app->add_option("--kind", o.kind, "uniform|permutation|injective|dr|small-range|hybrid|set-equality");
  app->add_option("--m", o.m, "domain size M (0: same as N)");
  app->add_option("--n", o.n, "codomain size N (set-equality: domain size)");
  app->add_option("--r", o.r, "range parameter r (integer or inf)");
  app->add_option("--depth", o.depth, "hybrid chain depth");
  app->add_option("--case", o.case_label, "set-equality case 1, 2 or 3");
}

void add_run_options(CLI::App* app, Options& o, bool trials = true) {
  app->add_option("--seed", o.seed, "experiment seed (default: $QCL_SEED or 0)");
  if (trials) app->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  app->add_option("--workers", o.workers, "worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
  app->add_option("--csv", o.csv_path, "write CSV rows to this file");
  app->add_option("--out", o.out_path, "write the JSON report to this file");
}

json config_echo(const CLI::App* sub) {
  static const std::set<std::string> skip = {"help", "json", "out", "csv", "plot", "transcripts", "workers"};
  json echo = {{"experiment", sub->get_name()}};
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (skip.count(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    if (opt->get_type_size() == 0) {
      echo[name] = opt->count() > 0;
    } else if (!value.empty()) {
      echo[name] = value;
    }
  }
  return echo;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("QCL_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "error: QCL_SEED must be an unsigned integer\n";
      return kExitValidation;
    }
  }

  CLI::App app{"Quantum collision lab: samplers, exact certificates, query simulations and scaling sweeps"};
  app.option_defaults()->always_capture_default()->take_last();
  app.require_subcommand(1);
  app.add_flag("--json", o.json_mode, "print the machine-readable JSON report instead of a summary");

  std::map<std::string, std::function<Outcome(const Options&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, std::function<Outcome(const Options&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->option_defaults()->always_capture_default()->take_last();
    sub->add_flag("--json", o.json_mode, "print the machine-readable JSON report instead of a summary");
    sub->add_option("--config", "JSON config file; flags override its values");
    handlers[name] = std::move(fn);
    return sub;
  };

  auto* sample = add("sample", "draw one function from a distribution and print it as JSON", cmd_sample);
  add_spec_options(sample, o);
  sample->add_option("--seed", o.seed, "sample seed");
  sample->add_option("--out", o.out_path, "write the JSON to this file");

  auto* lemma = add("verify-lemma", "certify exactly that p(r) is a polynomial in 1/r of degree <= k-1", cmd_verify_lemma);
  lemma->add_option("--n", o.n, "N (enumeration cap applies)");
  lemma->add_option("--k", o.k, "number of constraint pairs")->required();
  lemma->add_option("--rs", o.rs, "r values, e.g. 1..8 or 1,2,5; those > k are held out, inf is always checked");
  lemma->add_option("--max-n", o.max_n, "enumeration cap on N");
  lemma->add_option("--max-r", o.max_r, "enumeration cap on r");
  lemma->add_option("--csv", o.csv_path, "write CSV rows to this file");
  lemma->add_option("--out", o.out_path, "write the JSON report to this file");

  auto* bht = add("run-bht", "run BHT collision search on sampled oracles", cmd_run_bht);
  add_spec_options(bht, o);
  add_run_options(bht, o);
  bht->add_option("--k", o.k, "classical table size (default: ceil(M^(1/3)))");
  bht->add_option("--transcripts", o.transcripts_path, "write per-trial JSON lines here");

  auto* subset = add("run-subset", "subset-restriction collision search with the brute-force solver", cmd_run_subset);
  add_spec_options(subset, o);
  add_run_options(subset, o);
  subset->add_option("--subset-size", o.subset_size, "subset size (default: ceil(sqrt(2N)))");
  subset->add_flag("--literal", o.literal, "use the literal size ceil(sqrt(N)/2)");
  subset->add_option("--attempts", o.attempts, "fresh subsets per trial")->check(CLI::PositiveNumber);

  auto* adv = add("advantage", "estimate the distinguishing advantage between two worlds", cmd_advantage);
  add_run_options(adv, o);
  adv->add_option("--pair", o.pair, "uniform-permutation|uniform-small-range|dr-n-dr-inf|set-equality");
  adv->add_option("--n", o.n, "N");
  adv->add_option("--r", o.r, "small-range r");
  adv->add_option("--distinguisher", o.distinguisher, "collision-check|classical-birthday|image-count");
  adv->add_option("--q", o.q, "query budget");

  auto* sweep = add("sweep", "grid of advantages over N and q with log-log slope fits", cmd_sweep);
  add_run_options(sweep, o);
  sweep->add_option("--pair", o.pair, "world pair");
  sweep->add_option("--distinguisher", o.distinguisher, "distinguisher");
  sweep->add_option("--ns", o.ns, "N values, e.g. 256,512,1024");
  sweep->add_option("--qs", o.qs, "q values, e.g. 2..12");
  sweep->add_option("--regime", o.regime, "fit only rows with success below this");
  sweep->add_option("--plot", o.plot_path, "also write an SVG plot here");

  auto* report = add("report", "render a sweep or advantage JSON report as SVG", cmd_report);
  report->add_option("--input", o.input, "JSON report from sweep or advantage");
  report->add_option("--plot", o.plot_path, "SVG output path (default plot.svg)");

  add("run", "run the experiment named by a JSON config (--config FILE)", nullptr);

  std::set<std::string> names;
  for (const auto& [name, fn] : handlers) names.insert(name);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), names);
    if (args.size() >= 2 && args[1] == "run" && std::find(args.begin(), args.end(), "--help") == args.end() &&
        std::find(args.begin(), args.end(), "-h") == args.end()) {
      throw qcl::ParameterError("run needs --config FILE");
    }
    std::reverse(args.begin(), args.end());
    args.pop_back();  // program name
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const qcl::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    const auto start = std::chrono::steady_clock::now();
    Outcome out = handlers.at(name)(o);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (name != "sample") {
      out.report["config"] = config_echo(chosen);
      out.report["wall_clock_seconds"] = seconds;
    }
    const std::string report_text = out.report.dump(2) + "\n";
    if (!o.out_path.empty()) std::ofstream(o.out_path, std::ios::binary) << (name == "sample" ? out.report.dump() + "\n" : report_text);
    if (!o.csv_path.empty() && !out.csv.empty()) std::ofstream(o.csv_path, std::ios::binary) << out.csv;
    if (name == "sweep" && !o.plot_path.empty()) {
      if (const auto svg = qcl::plot::emit_plot(out.report)) {
        std::ofstream(o.plot_path, std::ios::binary) << *svg;
      } else {
        std::cerr << "warning: sweep produced no plottable rows; no plot written\n";
      }
    }
    if (o.json_mode) {
      std::cout << (name == "sample" ? out.report.dump() + "\n" : report_text);
    } else {
      std::cout << out.summary;
      if (o.csv_path.empty() && !out.csv.empty()) std::cout << out.csv;
    }
    return out.exit_code;
  } catch (const qcl::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const qcl::ParameterError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qcl::DimensionMismatch& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qcl::InterpolationError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

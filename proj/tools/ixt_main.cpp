// ixt: chain generation, exact and spectral quantities, Monte Carlo
// intersection-time estimation, and the theorem check harness.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "ixt/exact.hpp"
#include "ixt/families.hpp"
#include "ixt/harness.hpp"
#include "ixt/mc.hpp"
#include "ixt/parallel.hpp"
#include "ixt/spectral.hpp"

using namespace ixt;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;  // fixed so casual runs reproduce

struct ChainSource {
  std::string in_path;
  std::string family;
  std::uint32_t n = 0, dim = 0, side = 0, branch = 0, depth = 0, s = 0, m = 0;
  std::uint64_t family_seed = 0;
  bool assert_transitive = false;

  void add_options(CLI::App* cmd, bool family_seed_is_seed) {
    cmd->add_option("--in", in_path, "chain file to load");
    cmd->add_option("--family", family,
                    "cycle|path|complete|hypercube|torus|btree|rtree|wtree|twocliques");
    cmd->add_option("--n", n, "state count (cycle/path/complete/rtree/wtree)");
    cmd->add_option("--d", dim, "dimension (torus/hypercube)");
    cmd->add_option("--l", side, "side length (torus)");
    cmd->add_option("--branch", branch, "branching factor (btree)");
    cmd->add_option("--depth", depth, "depth (btree)");
    cmd->add_option("--s", s, "small clique size (twocliques; default round(sqrt(m)))");
    cmd->add_option("--m", m, "big clique size (twocliques)");
    cmd->add_option(family_seed_is_seed ? "--seed" : "--family-seed", family_seed,
                    "seed for random families");
    cmd->add_flag("--assert-transitive", assert_transitive,
                  "claim transitivity for a loaded chain (heuristic-checked)");
  }

  FamilySpec spec() const {
    FamilySpec f;
    if (family == "cycle")
      f = {.family = Family::cycle, .n = n};
    else if (family == "path")
      f = {.family = Family::path, .n = n};
    else if (family == "complete")
      f = {.family = Family::complete, .n = n};
    else if (family == "hypercube")
      f = {.family = Family::hypercube, .dim = dim};
    else if (family == "torus")
      f = {.family = Family::torus, .dim = dim, .side = side};
    else if (family == "btree")
      f = {.family = Family::balanced_tree, .branch = branch, .depth = depth};
    else if (family == "rtree")
      f = {.family = Family::random_tree, .n = n};
    else if (family == "wtree")
      f = {.family = Family::weighted_tree, .n = n};
    else if (family == "twocliques")
      f = {.family = Family::two_cliques, .small_clique = s, .big_clique = m};
    else
      fail(ErrorKind::Config, "unknown family '" + family + "'");
    f.seed = family_seed;
    return f;
  }

  struct Loaded {
    ChainMatrix chain;
    std::string id;
    std::optional<FamilySpec> fam;
  };

  Loaded load() const {
    if (!in_path.empty() && !family.empty())
      fail(ErrorKind::Config, "give exactly one chain source: --in or --family");
    if (!in_path.empty()) {
      ChainMatrix c = read_chain_file(in_path);
      if (assert_transitive) {
        if (!check_transitive_heuristic(c))
          fail(ErrorKind::Validation,
               "transitivity claim rejected by the necessary-condition heuristic");
        ChainFlags f = c.flags();
        f.transitive = true;
        c = c.with_flags(f);
      }
      return {std::move(c), in_path, std::nullopt};
    }
    if (family.empty()) fail(ErrorKind::Config, "give a chain source: --in or --family");
    FamilySpec f = spec();
    return {generate(f).chain, f.id(), f};
  }
};

StartLaw parse_start_side(const std::string& tok) {
  if (tok == "pi") return StartLaw::pi();
  return StartLaw::point(static_cast<state_t>(std::stoul(tok)));
}

std::pair<StartLaw, StartLaw> parse_start(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    fail(ErrorKind::Config, "--start expects 'x,y', 'pi,pi' or 'x,pi'");
  return {parse_start_side(s.substr(0, comma)), parse_start_side(s.substr(comma + 1))};
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail(ErrorKind::Io, "cannot open " + out_path + " for writing");
  out << payload;
}

double t_rel_hint(const ChainSource::Loaded& loaded) {
  if (loaded.fam) {
    if (auto sp = closed_form_spectrum(*loaded.fam)) return compute_q(*sp).t_rel;
  }
  const ChainMatrix& c = loaded.chain;
  if (c.flags().reversible && c.n() <= 512) return compute_q(spectrum(c)).t_rel;
  return static_cast<double>(c.n());
}

ordered_json estimate_json(const EstimateWithCI& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"samples", e.samples},
          {"seed", e.seed},
          {"truncation_cap", e.truncation_cap},
          {"truncated_fraction", e.truncated_fraction},
          {"lower_bound_only", e.lower_bound_only}};
}

int run(int argc, char** argv) {
  CLI::App app{"intersection times for finite Markov chains"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker count (default: hardware)");

  // generate ----------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "emit a chain file for a graph family");
  ChainSource gen_src;
  gen_src.add_options(gen, true);
  std::string gen_out;
  gen->add_option("--out", gen_out, "output path (default stdout)");

  // spectral ----------------------------------------------------------------
  auto* spec_cmd = app.add_subcommand("spectral", "eigenvalue quantities of a reversible chain");
  ChainSource spec_src;
  spec_src.add_options(spec_cmd, true);
  std::string spec_out;
  spec_cmd->add_option("--out", spec_out, "output path (default stdout)");

  // exact -------------------------------------------------------------------
  auto* exact_cmd = app.add_subcommand("exact", "exact mixing/hitting/intersection quantities");
  ChainSource exact_src;
  exact_src.add_options(exact_cmd, true);
  std::string exact_quantity, exact_start = "0,1", exact_out;
  std::uint64_t exact_t = 0;
  double exact_eps = 0.25;
  exact_cmd->add_option("--quantity", exact_quantity, "tmix|tces|thit|tH|etauI|pIt")->required();
  exact_cmd->add_option("--start", exact_start, "start pair for etauI/pIt (x,y or pi,pi)");
  exact_cmd->add_option("--t", exact_t, "horizon for pIt");
  exact_cmd->add_option("--eps", exact_eps, "TV threshold for tmix (default 1/4)");
  exact_cmd->add_option("--out", exact_out, "output path (default stdout)");

  // mc ----------------------------------------------------------------------
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo intersection estimators");
  ChainSource mc_src;
  mc_src.add_options(mc_cmd, false);
  std::string mc_quantity = "taui", mc_start = "0,1", mc_out;
  std::uint64_t mc_samples = 10000, mc_seed = kDefaultSeed, mc_cap = 0, mc_horizon = 0;
  mc_cmd->add_option("--quantity", mc_quantity, "taui|ti|tistar|epipi|it|st");
  mc_cmd->add_option("--samples", mc_samples, "replicates");
  mc_cmd->add_option("--seed", mc_seed, "RNG seed (default 0xC0FFEE)");
  mc_cmd->add_option("--cap", mc_cap, "truncation cap (default 100 (n + t_rel))");
  mc_cmd->add_option("--start", mc_start, "start pair: x,y | pi,pi | x,pi");
  mc_cmd->add_option("--horizon", mc_horizon, "t for the I_t / S_t quantities");
  mc_cmd->add_option("--out", mc_out, "output path (default stdout)");

  // harness -----------------------------------------------------------------
  auto* har = app.add_subcommand("harness", "theorem check suites");
  har->require_subcommand(1);
  auto* har_run = har->add_subcommand("run", "run a check suite");
  std::string suite = "all", har_out = "harness-out", windows_path;
  HarnessConfig hcfg;
  har_run->add_option("--suite", suite, "all|transitive|regular|trees|torus|twocliques|small");
  har_run->add_option("--out", har_out, "output directory");
  har_run->add_option("--seed", hcfg.seed, "global seed");
  har_run->add_option("--samples", hcfg.samples, "MC samples per estimate");
  har_run->add_option("--cap", hcfg.cap_scale, "truncation cap multiplier");
  har_run->add_option("--nmax", hcfg.nmax, "dense/exact budget");
  har_run->add_option("--windows", windows_path, "frozen window file (default: built-in)");

  auto* har_cal = har->add_subcommand("calibrate", "measure the ratio windows");
  std::string cal_out = "windows.json";
  HarnessConfig cal_cfg;
  har_cal->add_option("--out", cal_out, "window file to write");
  har_cal->add_option("--seed", cal_cfg.seed, "global seed");
  har_cal->add_option("--samples", cal_cfg.samples, "MC samples per estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  }

  if (threads > 0) set_max_threads(threads);

  if (gen->parsed()) {
    ChainSource::Loaded loaded = gen_src.load();
    std::fprintf(stderr, "generate %s n=%u\n", loaded.id.c_str(), loaded.chain.n());
    std::string payload;
    {
      std::ostringstream ss;
      write_chain(ss, loaded.chain);
      payload = ss.str();
    }
    write_output(gen_out, payload);
    return 0;
  }

  if (spec_cmd->parsed()) {
    ChainSource::Loaded loaded = spec_src.load();
    std::optional<Spectrum> sp;
    if (loaded.fam) sp = closed_form_spectrum(*loaded.fam);
    if (!sp) sp = spectrum(loaded.chain);
    SpectralSummary sum = compute_q(*sp);
    const std::uint64_t tu = uniform_mixing_time(loaded.chain);
    const double qtu = compute_qt(loaded.chain, 0, tu).qt;
    std::fprintf(stderr, "spectral %s n=%u\n", loaded.id.c_str(), loaded.chain.n());
    ordered_json j{{"n", loaded.chain.n()},
                   {"lambda2", loaded.chain.n() >= 2 ? sp->eigenvalues[1] : 1.0},
                   {"t_rel", sum.t_rel},
                   {"Q", sum.q},
                   {"t_unif", tu},
                   {"Q_tunif", qtu}};
    write_output(spec_out, j.dump(2) + "\n");
    return 0;
  }

  if (exact_cmd->parsed()) {
    ChainSource::Loaded loaded = exact_src.load();
    const ChainMatrix& chain = loaded.chain;
    std::fprintf(stderr, "exact %s %s n=%u\n", exact_quantity.c_str(), loaded.id.c_str(),
                 chain.n());
    ordered_json j{{"quantity", exact_quantity}};
    if (exact_quantity == "tmix") {
      j["value"] = tv_mixing_time(chain, exact_eps);
      j["method"] = chain.flags().transitive ? "single-row-scan" : "power-search";
    } else if (exact_quantity == "tces") {
      j["value"] = cesaro_mixing_time(chain);
      j["method"] = "running-average-scan";
    } else if (exact_quantity == "thit") {
      HittingTable h = hitting_times(chain);
      j["value"] = h.t_hit;
      j["method"] = "restricted-linear-solves";
      j["argmax"] = {h.argmax_from, h.argmax_to};
    } else if (exact_quantity == "tH") {
      THResult th = t_h_bruteforce(chain);
      j["value"] = th.value;
      j["method"] = "minimal-subset-enumeration";
      j["argmax_from"] = th.argmax_from;
      j["argmax_set"] = th.argmax_set;
    } else if (exact_quantity == "etauI") {
      auto [a, b] = parse_start(exact_start);
      if (a.kind != StartLaw::Kind::point || b.kind != StartLaw::Kind::point)
        fail(ErrorKind::Config, "etauI needs point starts");
      j["value"] = exact_intersection_expectation(chain, a.state, b.state);
      j["method"] = "absorbing-product-solve";
    } else if (exact_quantity == "pIt") {
      auto [a, b] = parse_start(exact_start);
      auto law = [&](const StartLaw& l) {
        return l.kind == StartLaw::Kind::stationary
                   ? DistVector(std::vector<double>(chain.pi().begin(), chain.pi().end()))
                   : DistVector::delta(chain.n(), l.state);
      };
      j["value"] = exact_intersection_probability(chain, law(a), law(b), exact_t);
      j["method"] = "forward-product-dp";
      j["t"] = exact_t;
    } else {
      fail(ErrorKind::Config, "unknown exact quantity '" + exact_quantity + "'");
    }
    j["budget_used"] = {{"n", chain.n()}};
    write_output(exact_out, j.dump(2) + "\n");
    return 0;
  }

  if (mc_cmd->parsed()) {
    ChainSource::Loaded loaded = mc_src.load();
    const ChainMatrix& chain = loaded.chain;
    const std::uint64_t cap = mc_cap ? mc_cap : default_cap(chain, t_rel_hint(loaded));
    std::fprintf(stderr, "mc %s %s n=%u samples=%llu seed=%llu cap=%llu\n", mc_quantity.c_str(),
                 loaded.id.c_str(), chain.n(), static_cast<unsigned long long>(mc_samples),
                 static_cast<unsigned long long>(mc_seed), static_cast<unsigned long long>(cap));
    ordered_json j{{"quantity", mc_quantity}, {"chain", loaded.id}};
    if (mc_quantity == "taui") {
      auto [a, b] = parse_start(mc_start);
      j["start"] = mc_start;
      j["estimate"] = estimate_json(estimate_tau_i(chain, a, b, mc_samples, cap, mc_seed));
    } else if (mc_quantity == "ti" || mc_quantity == "tistar") {
      TIEstimate e = mc_quantity == "ti" ? estimate_t_i(chain, mc_samples, cap, mc_seed)
                                         : estimate_t_i_star(chain, mc_samples, cap, mc_seed);
      j["estimate"] = estimate_json(e.estimate);
      j["argmax_x"] = e.x0;
      if (!e.y_from_pi) j["argmax_y"] = e.y0;
      j["exhaustive"] = e.exhaustive;
      if (!e.exhaustive) j["note"] = "candidate-pair lower-bound mode";
    } else if (mc_quantity == "epipi") {
      j["estimate"] = estimate_json(estimate_pi_pi_expectation(chain, mc_samples, cap, mc_seed));
    } else if (mc_quantity == "it") {
      auto [a, b] = parse_start(mc_start);
      if (a.kind != StartLaw::Kind::point || b.kind != StartLaw::Kind::point)
        fail(ErrorKind::Config, "I_t needs point starts");
      MomentEstimates m = intersection_moments(chain, a.state, b.state, mc_horizon, mc_samples, mc_seed);
      j["t"] = mc_horizon;
      j["estimate"] = estimate_json(m.first);
      j["second_moment"] = estimate_json(m.second);
    } else if (mc_quantity == "st") {
      auto [a, b] = parse_start(mc_start);
      (void)b;
      GreenTable g = green_table(chain, a.state, mc_horizon);
      const double qt = compute_qt(chain, a.state, mc_horizon).qt;
      FrequencyEstimate f = s_t_exceedance(chain, g, qt / 2, mc_samples, mc_seed);
      j["t"] = mc_horizon;
      j["threshold"] = qt / 2;
      j["freq"] = f.freq;
      j["std_error"] = f.std_error;
      j["samples"] = f.samples;
      j["seed"] = f.seed;
    } else {
      fail(ErrorKind::Config, "unknown mc quantity '" + mc_quantity + "'");
    }
    write_output(mc_out, j.dump(2) + "\n");
    return 0;
  }

  if (har_run->parsed()) {
    WindowTable windows =
        windows_path.empty() ? WindowTable::frozen_defaults() : WindowTable::load(windows_path);
    if (suite == "torus") {
      auto entries = torus_scaling(hcfg);
      ordered_json arr = ordered_json::array();
      for (const auto& e : entries) {
        ordered_json fit{{"dim", e.dim},
                         {"sides", e.fit.sizes},
                         {"t_i", e.fit.values},
                         {"slope", e.fit.slope},
                         {"intercept", e.fit.intercept},
                         {"r2", e.fit.r2},
                         {"asserted", e.asserted},
                         {"t_i_over_sqrt_n", e.sqrt_n_ratio},
                         {"t_i_over_sqrt_n_log_n", e.sqrt_n_log_ratio}};
        arr.push_back(fit);
        std::fprintf(stderr, "torus d=%u slope=%.3f r2=%.4f\n", e.dim, e.fit.slope, e.fit.r2);
      }
      std::filesystem::create_directories(har_out);
      std::ofstream out(std::filesystem::path(har_out) / "torus_scaling.json");
      out << arr.dump(2) << "\n";
      return 0;
    }
    auto instances = suite_instances(suite);
    std::fprintf(stderr, "harness run suite=%s instances=%zu seed=%llu samples=%llu\n",
                 suite.c_str(), instances.size(), static_cast<unsigned long long>(hcfg.seed),
                 static_cast<unsigned long long>(hcfg.samples));
    std::vector<InstanceReport> reports;
    for (const FamilySpec& s : instances) {
      std::fprintf(stderr, "  instance %s\n", s.id().c_str());
      InstanceData d = compute_instance(s, hcfg);
      reports.push_back(evaluate_checks(d, hcfg, windows));
    }
    const bool failed = emit_report(reports, har_out);
    std::size_t evaluated = 0, passed = 0;
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        if (c.evaluated && c.mode == "assert") {
          ++evaluated;
          passed += c.pass;
        }
    std::fprintf(stderr, "harness: %zu/%zu assert checks passed\n", passed, evaluated);
    return failed ? 1 : 0;
  }

  if (har_cal->parsed()) {
    WindowTable t = calibrate_windows(calibration_instances(), cal_cfg);
    t.save(cal_out);
    std::fprintf(stderr, "calibration written to %s\n", cal_out.c_str());
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ixt/chain.hpp"
#include "ixt/exact.hpp"
#include "ixt/families.hpp"
#include "ixt/mc.hpp"
#include "ixt/spectral.hpp"

namespace ixt {

inline constexpr int kReportSchemaVersion = 1;

// Ratio window for one check. One-sided checks use [0, hi]; two-sided windows
// come from the calibrate-then-freeze run (observed range inflated by 2).
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool two_sided = false;
};

class WindowTable {
 public:
  static WindowTable frozen_defaults();
  static WindowTable load(const std::string& path);
  void save(const std::string& path) const;

  const Window* find(const std::string& check_id) const;
  void set(const std::string& check_id, Window w) { windows_[check_id] = w; }
  const std::map<std::string, Window>& all() const { return windows_; }

 private:
  std::map<std::string, Window> windows_;
};

struct CheckOutcome {
  std::string id;
  std::string mode;  // "assert" (window or exact constant) | "info"
  bool evaluated = false;
  bool pass = false;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  Window window;
  std::string note;  // skip reason, proxy notes, favorable-endpoint details
};

struct InstanceReport {
  FamilySpec spec;
  std::string id;
  state_t n = 0;
  ChainFlags flags;
  bool is_tree = false;
  std::map<std::string, double> quantities;
  std::vector<CheckOutcome> checks;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

struct HarnessConfig {
  std::uint64_t seed = 0xC0FFEE;
  std::uint64_t samples = 4000;         // per t_I / t_I* / E_pipi estimate
  std::uint64_t moment_samples = 20000; // I_t moment identities
  std::uint64_t st_samples = 10000;     // S_t diagnostic
  double cap_scale = 100.0;             // truncation cap multiplier
  state_t nmax = 4096;                  // dense/exact budget
  bool moment_checks = true;            // run the I_t / S_t sampling checks
};

// All quantities the checks need for one instance; optional fields are empty
// when a budget rules the computation out.
struct InstanceData {
  explicit InstanceData(GeneratedChain g) : gc(std::move(g)) {}
  GeneratedChain gc;
  std::optional<double> q, t_rel, lambda2;
  std::optional<std::uint64_t> t_mix, t_ces, t_unif;
  std::optional<double> qt_unif;  // Q_{t_unif}
  std::optional<double> t_hit;
  std::optional<double> t_h;      // exact for n <= 18
  bool t_h_proxy = false;         // true when t_ces stands in for t_H
  std::optional<double> tree_central_hit;  // max_x E_x tau_v, v central
  std::optional<state_t> central;
  std::optional<TIEstimate> ti, ti_star;
  std::optional<EstimateWithCI> e_pipi;
};

InstanceData compute_instance(const FamilySpec& spec, const HarnessConfig& cfg);

// Evaluates every applicable check for the instance; checks whose hypotheses
// or budgets fail are reported as not evaluated with a reason.
InstanceReport evaluate_checks(const InstanceData& data, const HarnessConfig& cfg,
                               const WindowTable& windows);

std::vector<InstanceReport> run_check_suite(const std::vector<FamilySpec>& instances,
                                            const HarnessConfig& cfg,
                                            const WindowTable& windows);

// Window test for a ratio of two quantity ranges (Monte Carlo quantities enter
// with their 3-standard-error endpoints, exact ones with a degenerate range).
bool ratio_window_pass(double num_lo, double num_hi, double den_lo, double den_hi,
                       const Window& w);

// Calibration: observed ratio range per two-sided check across the
// calibration instances, inflated by factor 2 (one-sided: max ratio times 2).
// Needs at least 4 evaluated instances per check.
WindowTable calibrate_windows(const std::vector<FamilySpec>& instances,
                              const HarnessConfig& cfg);

struct SlopeFit {
  std::vector<double> sizes;   // abscissae (graph side lengths)
  std::vector<double> values;  // fitted quantity per size
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& sizes, const std::vector<double>& values);

struct TorusScalingEntry {
  std::uint32_t dim = 0;
  SlopeFit fit;                       // log t_I vs log side
  std::vector<double> sqrt_n_ratio;   // t_I / sqrt(n), d >= 4 normalizations
  std::vector<double> sqrt_n_log_ratio;  // t_I / (sqrt(n) log n)
  bool asserted = false;              // d <= 3 grids carry slope assertions
};

std::vector<TorusScalingEntry> torus_scaling(const HarnessConfig& cfg);

// Reports: one JSON array (schema-versioned, no timestamps so reruns are
// byte-identical) plus a flat CSV. Returns true when any evaluated
// assert-mode check failed.
bool emit_report(const std::vector<InstanceReport>& reports, const std::string& out_dir);

std::string report_json(const std::vector<InstanceReport>& reports);
std::string report_csv(const std::vector<InstanceReport>& reports);

// Named instance lists.
std::vector<FamilySpec> suite_instances(const std::string& name);  // all|transitive|regular|trees|torus|twocliques|small
std::vector<FamilySpec> calibration_instances();

}  // namespace ixt

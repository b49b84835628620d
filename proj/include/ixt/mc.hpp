#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ixt/alias.hpp"
#include "ixt/chain.hpp"
#include "ixt/rng.hpp"
#include "ixt/spectral.hpp"

namespace ixt {

struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t truncation_cap = 0;
  double truncated_fraction = 0.0;
  bool lower_bound_only = false;  // set whenever the cap bound any replicate
};

struct StartLaw {
  enum class Kind { point, stationary } kind = Kind::point;
  state_t state = 0;
  static StartLaw point(state_t s) { return {Kind::point, s}; }
  static StartLaw pi() { return {Kind::stationary, 0}; }
};

// O(1) membership set over states, reset by epoch bump instead of clearing.
class VisitMark {
 public:
  explicit VisitMark(state_t n = 0) : stamp_(n, 0) {}
  void clear() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  void insert(state_t s) { stamp_[s] = epoch_; }
  bool contains(state_t s) const { return stamp_[s] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// Two lockstep walks with their visited ranges; the intersected flag matches
// "ranges share a state" after every tick.
struct TrajectoryPair {
  explicit TrajectoryPair(state_t n) : range_x(n), range_y(n) {}
  state_t x = 0, y = 0;
  std::uint64_t t = 0;
  bool intersected = false;
  VisitMark range_x, range_y;

  void reset(state_t x0, state_t y0) {
    x = x0;
    y = y0;
    t = 0;
    range_x.clear();
    range_y.clear();
    range_x.insert(x0);
    range_y.insert(y0);
    intersected = x0 == y0;
  }

  // Advance both chains one step: insert both new positions, then check
  // cross-membership (the verdict only depends on the completed tick).
  bool tick(const ChainSampler& sampler, RngStream& rng) {
    x = sampler.step(x, rng);
    y = sampler.step(y, rng);
    range_x.insert(x);
    range_y.insert(y);
    ++t;
    intersected = range_y.contains(x) || range_x.contains(y);
    return intersected;
  }
};

// One intersection-time draw. The X start is drawn before the Y start; x0 = y0
// returns 0 without stepping. Returns cap when truncated (truncated = true).
std::uint64_t sample_tau_i(const ChainSampler& sampler, StartLaw x0, StartLaw y0,
                           std::uint64_t cap, RngStream& rng, TrajectoryPair& pair,
                           bool& truncated);

// Fills out[i] with the replicate-i intersection time; replicate streams are
// keyed by (seed, tag, job, i), so the result is independent of thread count.
void sample_tau_i_batch(const ChainMatrix& p, const ChainSampler& sampler, StartLaw x0,
                        StartLaw y0, std::uint64_t cap, std::uint64_t seed, std::uint64_t job,
                        std::span<double> out);
void sample_tau_i_batch_serial(const ChainMatrix& p, const ChainSampler& sampler, StartLaw x0,
                               StartLaw y0, std::uint64_t cap, std::uint64_t seed,
                               std::uint64_t job, std::span<double> out);

EstimateWithCI estimate_tau_i(const ChainMatrix& p, StartLaw x0, StartLaw y0,
                              std::uint64_t samples, std::uint64_t cap, std::uint64_t seed);

struct TIEstimate {
  EstimateWithCI estimate;
  state_t x0 = 0, y0 = 0;   // reported argmax pair (y0 unused for the star variant)
  bool y_from_pi = false;
  bool exhaustive = false;  // all ordered pairs (or all orbit representatives) covered
};

// max_{x,y} E[tau_I]: every ordered pair for n <= 64 (one orbit representative
// per start when the transitive flag is set), otherwise a candidate list of
// graph-distance extremes plus random pairs, reported as a lower-bound mode.
// Pairs are screened with a small share of the budget and the leaders are
// re-estimated at the full sample count.
TIEstimate estimate_t_i(const ChainMatrix& p, std::uint64_t samples, std::uint64_t cap,
                        std::uint64_t seed);

// max_x E[tau_I] with the Y chain started from pi each replicate.
TIEstimate estimate_t_i_star(const ChainMatrix& p, std::uint64_t samples, std::uint64_t cap,
                             std::uint64_t seed);

// Both starts from pi each replicate.
EstimateWithCI estimate_pi_pi_expectation(const ChainMatrix& p, std::uint64_t samples,
                                          std::uint64_t cap, std::uint64_t seed);

// One draw of I_t = #{(i,j): X_i = Y_j, i,j <= t}, via per-state visit tallies.
std::uint64_t count_intersections(const ChainSampler& sampler, state_t x0, state_t y0,
                                  std::uint64_t t, RngStream& rng);

struct MomentEstimates {
  EstimateWithCI first;   // mean of I_t
  EstimateWithCI second;  // mean of I_t^2
};

MomentEstimates intersection_moments(const ChainMatrix& p, state_t x0, state_t y0,
                                     std::uint64_t t, std::uint64_t samples, std::uint64_t seed);

struct FrequencyEstimate {
  double freq = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Empirical P(S_t >= threshold) where S_t = sum_{j<=t} g_t(x, X_j) along a
// single path started at green.x.
FrequencyEstimate s_t_exceedance(const ChainMatrix& p, const GreenTable& green, double threshold,
                                 std::uint64_t samples, std::uint64_t seed);

// Default truncation cap: 100 * (n + t_rel estimate); rarely binds because
// E[tau_I] <= 2 t_hit is polynomial in n.
std::uint64_t default_cap(const ChainMatrix& p, double t_rel_hint);

}  // namespace ixt

#include "ixt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ixt/parallel.hpp"

namespace ixt {

namespace {

// Per-thread scratch reused across replicates of one batch.
struct Scratch {
  explicit Scratch(state_t n) : pair(n), count_x(n, 0), count_y(n, 0), seen_x(n), seen_y(n) {}
  TrajectoryPair pair;
  std::vector<std::uint32_t> count_x, count_y;
  VisitMark seen_x, seen_y;
  std::vector<state_t> touched_x, touched_y;
};

struct ScratchPool {
  explicit ScratchPool(state_t n) {
    slots.resize(static_cast<std::size_t>(max_threads()));
    for (auto& s : slots) s = std::make_unique<Scratch>(n);
  }
  Scratch& at(int tid) { return *slots[static_cast<std::size_t>(tid)]; }
  std::vector<std::unique_ptr<Scratch>> slots;
};

EstimateWithCI summarize(std::span<const double> values, std::uint64_t seed, std::uint64_t cap,
                         std::uint64_t truncated_count) {
  EstimateWithCI est;
  est.samples = values.size();
  est.seed = seed;
  est.truncation_cap = cap;
  if (values.empty()) return est;
  double sum = 0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    est.std_error = sd / std::sqrt(static_cast<double>(values.size()));
  }
  est.truncated_fraction =
      static_cast<double>(truncated_count) / static_cast<double>(values.size());
  est.lower_bound_only = truncated_count > 0;
  return est;
}

state_t draw_start(const ChainSampler& sampler, const StartLaw& law, RngStream& rng) {
  return law.kind == StartLaw::Kind::point ? law.state : sampler.sample_pi(rng);
}

}  // namespace

std::uint64_t sample_tau_i(const ChainSampler& sampler, StartLaw x0, StartLaw y0,
                           std::uint64_t cap, RngStream& rng, TrajectoryPair& pair,
                           bool& truncated) {
  const state_t sx = draw_start(sampler, x0, rng);
  const state_t sy = draw_start(sampler, y0, rng);
  truncated = false;
  if (sx == sy) return 0;
  pair.reset(sx, sy);
  while (pair.t < cap) {
    if (pair.tick(sampler, rng)) return pair.t;
  }
  truncated = true;
  return cap;
}

namespace {

template <bool Parallel>
void tau_batch_impl(const ChainMatrix& p, const ChainSampler& sampler, StartLaw x0, StartLaw y0,
                    std::uint64_t cap, std::uint64_t seed, std::uint64_t job,
                    std::span<double> out) {
  ScratchPool pool(p.n());
  auto body = [&](std::uint64_t i, int tid) {
    RngStream rng = RngStream::keyed(seed, rng_tag::tau_i, job, i);
    bool truncated = false;
    out[i] = static_cast<double>(
        sample_tau_i(sampler, x0, y0, cap, rng, pool.at(tid).pair, truncated));
  };
  if constexpr (Parallel)
    parallel_for_index(out.size(), body);
  else
    serial_for_index(out.size(), body);
}

}  // namespace

void sample_tau_i_batch(const ChainMatrix& p, const ChainSampler& sampler, StartLaw x0,
                        StartLaw y0, std::uint64_t cap, std::uint64_t seed, std::uint64_t job,
                        std::span<double> out) {
  tau_batch_impl<true>(p, sampler, x0, y0, cap, seed, job, out);
}

void sample_tau_i_batch_serial(const ChainMatrix& p, const ChainSampler& sampler, StartLaw x0,
                               StartLaw y0, std::uint64_t cap, std::uint64_t seed,
                               std::uint64_t job, std::span<double> out) {
  tau_batch_impl<false>(p, sampler, x0, y0, cap, seed, job, out);
}

EstimateWithCI estimate_tau_i(const ChainMatrix& p, StartLaw x0, StartLaw y0,
                              std::uint64_t samples, std::uint64_t cap, std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::Validation, "need at least one sample");
  ChainSampler sampler(p);
  std::vector<double> vals(samples);
  sample_tau_i_batch(p, sampler, x0, y0, cap, seed, 0, vals);
  std::uint64_t trunc = 0;
  for (double v : vals)
    if (v >= static_cast<double>(cap)) ++trunc;
  return summarize(vals, seed, cap, trunc);
}

// ---------------------------------------------------------------------------
// t_I and t_I*: candidate starts, screening pass, full re-estimate of leaders.
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint32_t> bfs_distance(const ChainMatrix& p, state_t src) {
  std::vector<std::uint32_t> dist(p.n(), UINT32_MAX);
  std::vector<state_t> frontier{src}, next;
  dist[src] = 0;
  while (!frontier.empty()) {
    next.clear();
    for (state_t v : frontier) {
      for (const Entry& e : p.row(v)) {
        if (e.to != v && dist[e.to] == UINT32_MAX) {
          dist[e.to] = dist[v] + 1;
          next.push_back(e.to);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

struct Candidates {
  std::vector<std::pair<state_t, state_t>> pairs;  // y == x means "y ~ pi"
  bool exhaustive = false;
};

Candidates candidate_pairs(const ChainMatrix& p, std::uint64_t seed, bool star_mode) {
  const state_t n = p.n();
  Candidates c;
  if (star_mode) {
    // only the X start varies; encode y = x (ignored by the star sampler)
    if (p.flags().transitive) {
      c.pairs.push_back({0, 0});
      c.exhaustive = true;
    } else if (n <= 64) {
      for (state_t x = 0; x < n; ++x) c.pairs.push_back({x, x});
      c.exhaustive = true;
    } else {
      auto d0 = bfs_distance(p, 0);
      state_t u = static_cast<state_t>(
          std::max_element(d0.begin(), d0.end()) - d0.begin());
      auto du = bfs_distance(p, u);
      std::vector<state_t> order(n);
      for (state_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](state_t a, state_t b) {
        return du[a] != du[b] ? du[a] > du[b] : a < b;
      });
      for (state_t i = 0; i < std::min<state_t>(16, n); ++i) c.pairs.push_back({order[i], order[i]});
      RngStream rng = RngStream::keyed(seed, rng_tag::ti_screen, 0xabcd, 0);
      for (int i = 0; i < 16; ++i) {
        const state_t x = rng.below(n);
        c.pairs.push_back({x, x});
      }
      std::sort(c.pairs.begin(), c.pairs.end());
      c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
    }
    return c;
  }

  if (p.flags().transitive) {
    // E[tau_I] from (x, y) depends only on the orbit of the pair: fix x = 0.
    for (state_t y = 1; y < n; ++y) c.pairs.push_back({0, y});
    c.exhaustive = true;
  } else if (n <= 64) {
    for (state_t x = 0; x < n; ++x)
      for (state_t y = 0; y < n; ++y)
        if (x != y) c.pairs.push_back({x, y});
    c.exhaustive = true;
  } else {
    auto d0 = bfs_distance(p, 0);
    state_t u = static_cast<state_t>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto du = bfs_distance(p, u);
    std::vector<state_t> order(n);
    for (state_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](state_t a, state_t b) {
      return du[a] != du[b] ? du[a] > du[b] : a < b;
    });
    for (state_t i = 0; i < std::min<state_t>(16, n); ++i) {
      if (order[i] != u) c.pairs.push_back({u, order[i]});
    }
    RngStream rng = RngStream::keyed(seed, rng_tag::ti_screen, 0xabcd, 1);
    while (c.pairs.size() < 32) {
      const state_t x = rng.below(n), y = rng.below(n);
      if (x != y) c.pairs.push_back({x, y});
    }
    std::sort(c.pairs.begin(), c.pairs.end());
    c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
  }
  return c;
}

TIEstimate estimate_max_over_candidates(const ChainMatrix& p, std::uint64_t samples,
                                        std::uint64_t cap, std::uint64_t seed, bool star_mode) {
  TIEstimate out;
  out.y_from_pi = star_mode;
  if (p.n() == 1) {
    out.estimate.samples = samples;
    out.estimate.seed = seed;
    out.estimate.truncation_cap = cap;
    out.exhaustive = true;
    return out;  // tau_I = 0 identically
  }
  if (samples == 0) fail(ErrorKind::Validation, "need at least one sample");

  ChainSampler sampler(p);
  Candidates cand = candidate_pairs(p, seed, star_mode);
  const std::size_t npairs = cand.pairs.size();
  const std::uint64_t screen = std::min<std::uint64_t>(
      samples, std::max<std::uint64_t>(32, samples / npairs));

  auto law_of = [&](std::size_t pi_idx) {
    auto [x, y] = cand.pairs[pi_idx];
    return std::pair{StartLaw::point(x), star_mode ? StartLaw::pi() : StartLaw::point(y)};
  };

  // Screening pass: flat (pair, replicate) grid.
  std::vector<double> vals(npairs * screen);
  {
    ScratchPool pool(p.n());
    parallel_for_index(vals.size(), [&](std::uint64_t k, int tid) {
      const std::size_t pair_idx = k / screen;
      const std::uint64_t rep = k % screen;
      auto [lx, ly] = law_of(pair_idx);
      RngStream rng = RngStream::keyed(seed, rng_tag::ti_screen, pair_idx, rep);
      bool truncated = false;
      vals[k] = static_cast<double>(
          sample_tau_i(sampler, lx, ly, cap, rng, pool.at(tid).pair, truncated));
    });
  }
  std::vector<double> mean(npairs, 0.0);
  for (std::size_t i = 0; i < npairs; ++i) {
    double s = 0;
    for (std::uint64_t r = 0; r < screen; ++r) s += vals[i * screen + r];
    mean[i] = s / static_cast<double>(screen);
  }

  // Re-estimate the leading pairs at the full budget.
  std::vector<std::size_t> rank(npairs);
  for (std::size_t i = 0; i < npairs; ++i) rank[i] = i;
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return mean[a] != mean[b] ? mean[a] > mean[b] : a < b;
  });
  const std::size_t rescore = std::min<std::size_t>(4, npairs);

  bool have = false;
  EstimateWithCI best;
  std::size_t best_idx = 0;
  std::vector<double> final_vals(samples);
  for (std::size_t r = 0; r < rescore; ++r) {
    const std::size_t pair_idx = rank[r];
    auto [lx, ly] = law_of(pair_idx);
    sample_tau_i_batch(p, sampler, lx, ly, cap, seed,
                       (std::uint64_t(rng_tag::ti_final) << 32) | pair_idx, final_vals);
    std::uint64_t trunc = 0;
    for (double v : final_vals)
      if (v >= static_cast<double>(cap)) ++trunc;
    EstimateWithCI est = summarize(final_vals, seed, cap, trunc);
    if (!have || est.mean > best.mean || (est.mean == best.mean && pair_idx < best_idx)) {
      have = true;
      best = est;
      best_idx = pair_idx;
    }
  }
  out.estimate = best;
  out.x0 = cand.pairs[best_idx].first;
  out.y0 = cand.pairs[best_idx].second;
  out.exhaustive = cand.exhaustive;
  return out;
}

}  // namespace

TIEstimate estimate_t_i(const ChainMatrix& p, std::uint64_t samples, std::uint64_t cap,
                        std::uint64_t seed) {
  return estimate_max_over_candidates(p, samples, cap, seed, false);
}

TIEstimate estimate_t_i_star(const ChainMatrix& p, std::uint64_t samples, std::uint64_t cap,
                             std::uint64_t seed) {
  return estimate_max_over_candidates(p, samples, cap, seed, true);
}

EstimateWithCI estimate_pi_pi_expectation(const ChainMatrix& p, std::uint64_t samples,
                                          std::uint64_t cap, std::uint64_t seed) {
  return estimate_tau_i(p, StartLaw::pi(), StartLaw::pi(), samples, cap, seed);
}

std::uint64_t count_intersections(const ChainSampler& sampler, state_t x0, state_t y0,
                                  std::uint64_t t, RngStream& rng) {
  thread_local std::vector<std::uint32_t> cx, cy;
  thread_local std::vector<std::uint32_t> stamp_x, stamp_y;
  thread_local std::uint32_t epoch = 0;
  thread_local std::vector<state_t> touched_x;
  const state_t n = sampler.n();
  if (cx.size() < n) {
    cx.assign(n, 0);
    cy.assign(n, 0);
    stamp_x.assign(n, 0);
    stamp_y.assign(n, 0);
    epoch = 0;
  }
  if (++epoch == 0) {
    std::fill(stamp_x.begin(), stamp_x.end(), 0);
    std::fill(stamp_y.begin(), stamp_y.end(), 0);
    epoch = 1;
  }
  touched_x.clear();

  auto tally = [&](std::vector<std::uint32_t>& count, std::vector<std::uint32_t>& stamp,
                   state_t s, bool track) {
    if (stamp[s] != epoch) {
      stamp[s] = epoch;
      count[s] = 0;
      if (track) touched_x.push_back(s);
    }
    ++count[s];
  };

  state_t x = x0, y = y0;
  tally(cx, stamp_x, x, true);
  tally(cy, stamp_y, y, false);
  for (std::uint64_t j = 1; j <= t; ++j) {
    x = sampler.step(x, rng);
    y = sampler.step(y, rng);
    tally(cx, stamp_x, x, true);
    tally(cy, stamp_y, y, false);
  }
  std::uint64_t total = 0;
  for (state_t s : touched_x) {
    if (stamp_y[s] == epoch)
      total += static_cast<std::uint64_t>(cx[s]) * cy[s];
  }
  return total;
}

MomentEstimates intersection_moments(const ChainMatrix& p, state_t x0, state_t y0,
                                     std::uint64_t t, std::uint64_t samples,
                                     std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::Validation, "need at least one sample");
  ChainSampler sampler(p);
  std::vector<double> first(samples), second(samples);
  parallel_for_index(samples, [&](std::uint64_t i, int) {
    RngStream rng = RngStream::keyed(seed, rng_tag::count_i, (std::uint64_t(x0) << 32) | y0, i);
    const double v = static_cast<double>(count_intersections(sampler, x0, y0, t, rng));
    first[i] = v;
    second[i] = v * v;
  });
  MomentEstimates out;
  out.first = summarize(first, seed, 0, 0);
  out.second = summarize(second, seed, 0, 0);
  return out;
}

FrequencyEstimate s_t_exceedance(const ChainMatrix& p, const GreenTable& green, double threshold,
                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::Validation, "need at least one sample");
  ChainSampler sampler(p);
  std::vector<double> hit(samples);
  parallel_for_index(samples, [&](std::uint64_t i, int) {
    RngStream rng = RngStream::keyed(seed, rng_tag::s_t, green.x, i);
    state_t x = green.x;
    double s = green.g[x];
    for (std::uint64_t j = 1; j <= green.horizon; ++j) {
      x = sampler.step(x, rng);
      s += green.g[x];
    }
    hit[i] = s >= threshold ? 1.0 : 0.0;
  });
  double freq = 0;
  for (double h : hit) freq += h;
  freq /= static_cast<double>(samples);
  FrequencyEstimate out;
  out.freq = freq;
  out.std_error = std::sqrt(std::max(freq * (1.0 - freq), 0.0) / static_cast<double>(samples));
  out.samples = samples;
  out.seed = seed;
  return out;
}

std::uint64_t default_cap(const ChainMatrix& p, double t_rel_hint) {
  const double cap = 100.0 * (static_cast<double>(p.n()) + std::max(t_rel_hint, 1.0));
  return cap > 9e18 ? std::uint64_t(9e18) : static_cast<std::uint64_t>(cap);
}

}  // namespace ixt

#include "ixt/exact.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dense_power.hpp"
#include "ixt/parallel.hpp"

namespace ixt {

namespace {

std::uint64_t step_cap(state_t n) {
  const double c = 10.0 * std::pow(static_cast<double>(n), 3.0);
  return c > 9e18 ? std::uint64_t(9e18) : static_cast<std::uint64_t>(c);
}

double tv_from_pi(const double* row, std::span<const double> pi) {
  double s = 0;
  for (std::size_t y = 0; y < pi.size(); ++y) s += std::abs(row[y] - pi[y]);
  return 0.5 * s;
}

}  // namespace

std::uint64_t tv_mixing_time(const ChainMatrix& p, double eps) {
  if (eps <= 0 || eps >= 1) fail(ErrorKind::Validation, "eps must lie in (0,1)");
  const state_t n = p.n();
  if (n == 1) return 0;
  const std::uint64_t cap = step_cap(n);

  if (p.flags().transitive) {
    // all starts are equivalent; scan one row
    DistVector d = DistVector::delta(n, 0);
    std::vector<double> row(n);
    for (std::uint64_t t = 0;; ++t) {
      for (state_t y = 0; y < n; ++y) row[y] = d[y];
      if (tv_from_pi(row.data(), p.pi()) <= eps) return t;
      if (t >= cap) fail(ErrorKind::Divergence, "TV criterion not reached within step cap");
      d = evolve(p, d, 1);
    }
  }

  return detail::monotone_first_crossing(p, cap, [&](const double* m, state_t nn) {
    for (state_t x = 0; x < nn; ++x)
      if (tv_from_pi(m + static_cast<std::size_t>(x) * nn, p.pi()) > eps) return false;
    return true;
  });
}

std::uint64_t cesaro_mixing_time(const ChainMatrix& p) {
  const state_t n = p.n();
  const std::uint64_t cap = step_cap(n);

  if (p.flags().transitive || n == 1) {
    DistVector d = DistVector::delta(n, 0);
    std::vector<double> sum(n, 0.0), avg(n);
    for (std::uint64_t t = 1;; ++t) {
      for (state_t y = 0; y < n; ++y) sum[y] += d[y];  // adds p_{t-1}
      for (state_t y = 0; y < n; ++y) avg[y] = sum[y] / static_cast<double>(t);
      if (tv_from_pi(avg.data(), p.pi()) <= 0.25) return t;
      if (t >= cap) fail(ErrorKind::Divergence, "Cesaro criterion not reached within step cap");
      d = evolve(p, d, 1);
    }
  }

  // all starts: running average of the row stack
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> cur(nn, 0.0), next(nn, 0.0), sum(nn, 0.0);
  for (state_t i = 0; i < n; ++i) cur[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (std::uint64_t t = 1;; ++t) {
    for (std::size_t i = 0; i < nn; ++i) sum[i] += cur[i];
    bool ok = true;
    for (state_t x = 0; x < n && ok; ++x) {
      double s = 0;
      const double* row = sum.data() + static_cast<std::size_t>(x) * n;
      for (state_t y = 0; y < n; ++y) s += std::abs(row[y] / static_cast<double>(t) - p.pi_at(y));
      ok = 0.5 * s <= 0.25;
    }
    if (ok) return t;
    if (t >= cap) fail(ErrorKind::Divergence, "Cesaro criterion not reached within step cap");
    evolve_rows(p, cur.data(), next.data(), n);
    cur.swap(next);
  }
}

namespace {

// E_x[tau_target] for all x by solving (I - P restricted to x != target) h = 1.
std::vector<double> solve_hitting(const ChainMatrix& p, state_t target) {
  const state_t n = p.n();
  std::vector<double> out(n, 0.0);
  if (n == 1) return out;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n - 1, n - 1);
  auto idx = [&](state_t s) { return s < target ? s : s - 1; };
  for (state_t x = 0; x < n; ++x) {
    if (x == target) continue;
    const state_t r = idx(x);
    a(r, r) += 1.0;
    for (const Entry& e : p.row(x)) {
      if (e.to == target) continue;
      a(r, idx(e.to)) -= e.p;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n - 1);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd h = lu.solve(rhs);
  if (!h.allFinite() || (a * h - rhs).cwiseAbs().maxCoeff() > 1e-6)
    fail(ErrorKind::Structural, "singular hitting system: chain is reducible");
  for (state_t x = 0; x < n; ++x)
    if (x != target) out[x] = h(idx(x));
  return out;
}

HittingTable assemble_hitting(const ChainMatrix& p, bool parallel) {
  const state_t n = p.n();
  if (n > 4096) fail(ErrorKind::Budget, "hitting_times capped at n <= 4096");
  if (!p.strongly_connected()) fail(ErrorKind::Structural, "chain is reducible");
  HittingTable out;
  out.n = n;
  out.h.assign(static_cast<std::size_t>(n) * n, 0.0);
  auto solve_col = [&](std::uint64_t y, int) {
    std::vector<double> col = solve_hitting(p, static_cast<state_t>(y));
    for (state_t x = 0; x < n; ++x) out.h[static_cast<std::size_t>(x) * n + y] = col[x];
  };
  if (parallel)
    parallel_for_index(n, solve_col);
  else
    serial_for_index(n, solve_col);
  for (state_t x = 0; x < n; ++x)
    for (state_t y = 0; y < n; ++y)
      if (out.at(x, y) > out.t_hit) {
        out.t_hit = out.at(x, y);
        out.argmax_from = x;
        out.argmax_to = y;
      }
  return out;
}

}  // namespace

HittingTable hitting_times(const ChainMatrix& p) { return assemble_hitting(p, true); }
HittingTable hitting_times_serial(const ChainMatrix& p) { return assemble_hitting(p, false); }

std::vector<double> hitting_time_to(const ChainMatrix& p, state_t target) {
  if (target >= p.n()) fail(ErrorKind::Validation, "target out of range");
  if (!p.strongly_connected()) fail(ErrorKind::Structural, "chain is reducible");
  return solve_hitting(p, target);
}

namespace {

// max_x E_x[tau_A] over the complement of A (states inside A hit at time 0).
double max_hitting_of_set(const ChainMatrix& p, const std::vector<char>& in_set,
                          state_t* argmax_from) {
  const state_t n = p.n();
  std::vector<state_t> outside;
  for (state_t s = 0; s < n; ++s)
    if (!in_set[s]) outside.push_back(s);
  if (outside.empty()) {
    if (argmax_from) *argmax_from = 0;
    return 0.0;
  }
  std::vector<std::int32_t> idx(n, -1);
  for (std::size_t i = 0; i < outside.size(); ++i) idx[outside[i]] = static_cast<std::int32_t>(i);
  const auto k = static_cast<Eigen::Index>(outside.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < outside.size(); ++i) {
    a(i, i) += 1.0;
    for (const Entry& e : p.row(outside[i]))
      if (idx[e.to] >= 0) a(i, idx[e.to]) -= e.p;
  }
  Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(k));
  if (!h.allFinite()) fail(ErrorKind::Structural, "singular restricted system");
  Eigen::Index best = 0;
  const double v = h.maxCoeff(&best);
  if (argmax_from) *argmax_from = outside[static_cast<std::size_t>(best)];
  return v;
}

}  // namespace

THResult t_h_bruteforce(const ChainMatrix& p) {
  const state_t n = p.n();
  if (n > 18)
    fail(ErrorKind::Budget,
         "t_H enumeration capped at n <= 18; use t_h_candidate_lower_bound beyond");
  THResult out;
  if (n == 1) {
    out.argmax_set = {0};
    return out;  // the only qualifying set is the whole space
  }

  std::vector<double> pi(p.pi().begin(), p.pi().end());
  std::vector<char> in_set(n, 0);
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double m = 0;
    for (state_t s = 0; s < n; ++s)
      if (mask >> s & 1) m += pi[s];
    if (m < 0.125) continue;
    // only inclusion-minimal qualifying sets can attain the max
    bool minimal = true;
    for (state_t s = 0; s < n && minimal; ++s)
      if ((mask >> s & 1) && m - pi[s] >= 0.125) minimal = false;
    if (!minimal) continue;

    for (state_t s = 0; s < n; ++s) in_set[s] = (mask >> s & 1) != 0;
    state_t from = 0;
    const double v = max_hitting_of_set(p, in_set, &from);
    if (v > out.value) {
      out.value = v;
      out.argmax_from = from;
      out.argmax_set.clear();
      for (state_t s = 0; s < n; ++s)
        if (mask >> s & 1) out.argmax_set.push_back(s);
    }
  }
  return out;
}

double t_h_candidate_lower_bound(const ChainMatrix& p,
                                 const std::vector<std::vector<state_t>>& candidates) {
  if (candidates.empty()) fail(ErrorKind::Validation, "no candidate sets supplied");
  if (p.n() > 4096) fail(ErrorKind::Budget, "candidate evaluation capped at n <= 4096");
  double best = 0;
  std::vector<char> in_set(p.n());
  for (const auto& set : candidates) {
    std::fill(in_set.begin(), in_set.end(), 0);
    double mass = 0;
    for (state_t s : set) {
      if (s >= p.n()) fail(ErrorKind::Validation, "candidate state out of range");
      if (!in_set[s]) mass += p.pi_at(s);
      in_set[s] = 1;
    }
    if (mass < 0.125)
      fail(ErrorKind::Validation, "candidate set has stationary mass below 1/8");
    best = std::max(best, max_hitting_of_set(p, in_set, nullptr));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exact intersection quantities on the product-with-ranges state space.
// A live state packs (x, y, R_X, R_Y) with x in R_X, y in R_Y and disjoint
// ranges; a tick moves both chains, inserts the new positions, and absorbs as
// soon as the ranges meet.
// ---------------------------------------------------------------------------

namespace {

constexpr state_t kProductCap = 5;

struct ProductGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> trans;  // live -> live
  std::vector<double> absorb;                                        // live -> absorbed mass
  std::unordered_map<std::uint32_t, std::uint32_t> index;
  std::uint32_t node(std::uint32_t key) {
    auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(trans.size()));
    if (fresh) {
      trans.emplace_back();
      absorb.push_back(0.0);
    }
    return it->second;
  }
};

std::uint32_t pack(state_t x, state_t y, std::uint32_t rx, std::uint32_t ry) {
  return x | (y << 3) | (rx << 6) | (ry << 11);
}

// Explores every live state reachable from the given start pairs.
ProductGraph build_product_graph(const ChainMatrix& p,
                                 const std::vector<std::pair<state_t, state_t>>& starts,
                                 std::vector<std::uint32_t>& start_nodes) {
  ProductGraph g;
  std::vector<std::uint32_t> queue;
  start_nodes.clear();
  for (auto [x0, y0] : starts) {
    const std::uint32_t key = pack(x0, y0, 1u << x0, 1u << y0);
    const bool fresh = !g.index.contains(key);
    const std::uint32_t id = g.node(key);
    start_nodes.push_back(id);
    if (fresh) queue.push_back(key);
  }
  while (!queue.empty()) {
    const std::uint32_t key = queue.back();
    queue.pop_back();
    const std::uint32_t id = g.index.at(key);
    const state_t x = key & 7, y = (key >> 3) & 7;
    const std::uint32_t rx = (key >> 6) & 31, ry = (key >> 11) & 31;
    for (const Entry& ex : p.row(x)) {
      for (const Entry& ey : p.row(y)) {
        const double pr = ex.p * ey.p;
        const std::uint32_t nrx = rx | (1u << ex.to);
        const std::uint32_t nry = ry | (1u << ey.to);
        if (nrx & nry) {
          g.absorb[id] += pr;
          continue;
        }
        const std::uint32_t nkey = pack(ex.to, ey.to, nrx, nry);
        const bool fresh = !g.index.contains(nkey);
        const std::uint32_t nid = g.node(nkey);
        if (fresh) queue.push_back(nkey);
        g.trans[id].push_back({nid, pr});
      }
    }
    if (g.trans.size() > 4'000'000)
      fail(ErrorKind::Budget, "product state space exploded past the practical cap");
  }
  return g;
}

}  // namespace

double exact_intersection_expectation(const ChainMatrix& p, state_t x0, state_t y0) {
  if (p.n() > kProductCap)
    fail(ErrorKind::Budget, "exact intersection expectation capped at n <= 5");
  if (x0 >= p.n() || y0 >= p.n()) fail(ErrorKind::Validation, "start state out of range");
  if (x0 == y0) return 0.0;  // ranges already meet at time 0

  std::vector<std::uint32_t> start_nodes;
  ProductGraph g = build_product_graph(p, {{x0, y0}}, start_nodes);
  const auto m = static_cast<Eigen::Index>(g.trans.size());

  // (I - T) e = 1
  std::vector<Eigen::Triplet<double>> trip;
  for (std::uint32_t i = 0; i < g.trans.size(); ++i) {
    double diag = 1.0;
    for (auto [j, pr] : g.trans[i]) {
      if (j == i)
        diag -= pr;
      else
        trip.emplace_back(i, j, -pr);
    }
    trip.emplace_back(i, i, diag);
  }
  Eigen::SparseMatrix<double> a(m, m);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    fail(ErrorKind::Structural, "absorbing system is singular (chain not irreducible?)");
  Eigen::VectorXd e = lu.solve(Eigen::VectorXd::Ones(m));
  if (lu.info() != Eigen::Success || !e.allFinite())
    fail(ErrorKind::Structural, "absorbing solve failed");
  return e(start_nodes[0]);
}

double exact_intersection_probability(const ChainMatrix& p, const DistVector& mu,
                                      const DistVector& nu, std::uint64_t t) {
  if (p.n() > kProductCap)
    fail(ErrorKind::Budget, "exact intersection probability capped at n <= 5");
  if (t > 64) fail(ErrorKind::Budget, "exact intersection probability capped at t <= 64");
  if (mu.size() != p.n() || nu.size() != p.n())
    fail(ErrorKind::Validation, "initial law size mismatch");

  double absorbed = 0.0;
  std::vector<std::pair<state_t, state_t>> starts;
  std::vector<double> start_mass;
  for (state_t a = 0; a < p.n(); ++a) {
    if (mu[a] == 0.0) continue;
    for (state_t b = 0; b < p.n(); ++b) {
      if (nu[b] == 0.0) continue;
      if (a == b) {
        absorbed += mu[a] * nu[b];
      } else {
        starts.push_back({a, b});
        start_mass.push_back(mu[a] * nu[b]);
      }
    }
  }
  if (starts.empty()) return absorbed;

  std::vector<std::uint32_t> start_nodes;
  ProductGraph g = build_product_graph(p, starts, start_nodes);
  std::vector<double> mass(g.trans.size(), 0.0), next(g.trans.size(), 0.0);
  for (std::size_t i = 0; i < starts.size(); ++i) mass[start_nodes[i]] += start_mass[i];

  for (std::uint64_t step = 0; step < t; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t i = 0; i < g.trans.size(); ++i) {
      if (mass[i] == 0.0) continue;
      absorbed += mass[i] * g.absorb[i];
      for (auto [j, pr] : g.trans[i]) next[j] += mass[i] * pr;
    }
    mass.swap(next);
  }
  return absorbed;
}

}  // namespace ixt

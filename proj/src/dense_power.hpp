#pragma once

// Internal: first-crossing search for monotone distance criteria on matrix
// powers. Both the TV and the uniform-ratio distance to pi are nonincreasing
// in t (each row of P^{t+1} is a convex combination of rows of P^t), so after
// a direct scan window the smallest crossing can be bracketed by repeated
// squaring and pinned down by bisection.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "ixt/chain.hpp"
#include "ixt/kernels.hpp"

namespace ixt::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// crit(m, n) reads the row-major n x n matrix of t-step distributions and
// returns true once the distance criterion is satisfied.
using PowerCrit = std::function<bool(const double* m, state_t n)>;

inline RowMatrix dense_of(const ChainMatrix& p) {
  RowMatrix m = RowMatrix::Zero(p.n(), p.n());
  for (state_t x = 0; x < p.n(); ++x)
    for (const Entry& e : p.row(x)) m(x, e.to) = e.p;
  return m;
}

// Smallest t <= cap with crit(P^t); Divergence error when the cap is hit,
// Budget error when the chain is too large for the dense doubling phase.
inline std::uint64_t monotone_first_crossing(const ChainMatrix& p, std::uint64_t cap,
                                             const PowerCrit& crit,
                                             std::uint64_t direct_limit = 512,
                                             state_t dense_budget = 2048) {
  const state_t n = p.n();
  std::vector<double> cur(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> next(cur.size(), 0.0);
  for (state_t i = 0; i < n; ++i) cur[static_cast<std::size_t>(i) * n + i] = 1.0;

  for (std::uint64_t t = 0; t <= std::min(direct_limit, cap); ++t) {
    if (crit(cur.data(), n)) return t;
    if (t == cap) break;
    evolve_rows(p, cur.data(), next.data(), n);
    cur.swap(next);
  }
  if (direct_limit >= cap)
    fail(ErrorKind::Divergence, "mixing criterion not reached within step cap");
  if (n > dense_budget)
    fail(ErrorKind::Budget, "chain too large for the dense power search");

  std::vector<RowMatrix> pows;
  pows.push_back(dense_of(p));  // P^(2^0)
  std::size_t j = 1;
  for (;; ++j) {
    pows.push_back(pows[j - 1] * pows[j - 1]);
    const std::uint64_t t = std::uint64_t(1) << j;
    if (t > direct_limit && crit(pows[j].data(), n)) break;
    if (t >= cap) fail(ErrorKind::Divergence, "mixing criterion not reached within step cap");
  }

  std::uint64_t lo = std::uint64_t(1) << (j - 1);  // crit false (scanned or tested)
  std::uint64_t hi = std::uint64_t(1) << j;        // crit true
  auto power_at = [&](std::uint64_t t) {
    RowMatrix m;
    bool init = false;
    for (std::size_t b = 0; b < pows.size(); ++b) {
      if (!(t >> b & 1)) continue;
      m = init ? RowMatrix(m * pows[b]) : pows[b];
      init = true;
    }
    return m;
  };
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    RowMatrix m = power_at(mid);
    if (crit(m.data(), n))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace ixt::detail

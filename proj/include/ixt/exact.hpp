#pragma once

#include <cstdint>
#include <vector>

#include "ixt/chain.hpp"

namespace ixt {

// Smallest t with max_x TV(p_t(x,.), pi) <= eps. Transitive chains scan a
// single row; others use stepping plus the dense power search.
std::uint64_t tv_mixing_time(const ChainMatrix& p, double eps = 0.25);

// Smallest t with max_x TV((1/t) sum_{s<t} p_s(x,.), pi) <= 1/4.
std::uint64_t cesaro_mixing_time(const ChainMatrix& p);

// Expected first-visit times h[x][y], via one restricted linear solve per
// target. Diagonal is zero.
struct HittingTable {
  state_t n = 0;
  std::vector<double> h;  // row-major
  double t_hit = 0.0;
  state_t argmax_from = 0, argmax_to = 0;
  double at(state_t x, state_t y) const { return h[static_cast<std::size_t>(x) * n + y]; }
};

HittingTable hitting_times(const ChainMatrix& p);
HittingTable hitting_times_serial(const ChainMatrix& p);  // reference for the parallel solves

// E_x[tau_target] for all x; single restricted solve.
std::vector<double> hitting_time_to(const ChainMatrix& p, state_t target);

// max over starts x and sets A with pi(A) >= 1/8 of E_x[tau_A], by subset
// enumeration (only inclusion-minimal qualifying sets need solving). n <= 18.
struct THResult {
  double value = 0.0;
  state_t argmax_from = 0;
  std::vector<state_t> argmax_set;
};

THResult t_h_bruteforce(const ChainMatrix& p);

// Certified lower bound on t_H from a caller-supplied candidate family; every
// candidate must have pi(A) >= 1/8.
double t_h_candidate_lower_bound(const ChainMatrix& p,
                                 const std::vector<std::vector<state_t>>& candidates);

// Exact E[tau_I] for two independent copies started at (x0, y0), by solving
// the absorbing system over reachable (positions, visited ranges) states.
// n <= 5.
double exact_intersection_expectation(const ChainMatrix& p, state_t x0, state_t y0);

// Exact P(I_t > 0) = P(tau_I <= t) under independent starts mu x nu, by
// forward dynamic programming over the same product states. n <= 5, t <= 64.
double exact_intersection_probability(const ChainMatrix& p, const DistVector& mu,
                                      const DistVector& nu, std::uint64_t t);

}  // namespace ixt

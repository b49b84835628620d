#pragma once

#include <cstdint>

namespace ixt {

// All numeric slack lives here. The theory statements are asymptotic; every
// concrete comparison in the library goes through an explicit epsilon from
// this record so tests and modules agree on the same constants.
struct Tolerances {
  double row_sum = 1e-12;            // per-row stochasticity
  double lazy_diag = 1e-12;          // diagonal >= 1/2 - eps when lazy flag set
  double pi_residual = 1e-10;        // l1 norm of pi P - pi
  double detailed_balance = 1e-10;   // max |pi(x)p(x,y) - pi(y)p(y,x)|
  double dist_sum = 1e-10;           // distribution vectors sum to 1
  double dist_entry_floor = -1e-15;  // entries below 0 but above this clamp to 0
  double power_iter_residual = 1e-12;
  std::int64_t power_iter_max = 1000000;
  double eig_unit = 1e-9;        // |lambda - 1| below this counts as a unit eigenvalue
  double eig_source_match = 1e-7;  // closed form vs dense eigensolve
  double qt_dual_rel = 1e-8;       // relative gap between the two Q_t formulas
  double heuristic_match = 1e-10;  // transitivity heuristic comparisons
  double zero_entry = 1e-300;      // entries at or below this are treated as absent

  static const Tolerances& defaults() {
    static const Tolerances t{};
    return t;
  }
};

}  // namespace ixt

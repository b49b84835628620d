#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ixt/errors.hpp"
#include "ixt/tolerances.hpp"

namespace ixt {

using state_t = std::uint32_t;

struct Entry {
  state_t to;
  double p;
};

struct ChainFlags {
  bool lazy = false;
  bool reversible = false;
  bool transitive = false;  // claimed by the constructor/user, see check_transitive_heuristic
  bool regular = false;
};

// Probability vector over the state space. Entries in [-1e-15, 0) are clamped
// to zero at construction; the vector must sum to 1 within 1e-10.
class DistVector {
 public:
  DistVector() = default;
  explicit DistVector(std::vector<double> probs, const Tolerances& tol = Tolerances::defaults());
  static DistVector delta(state_t n, state_t x);
  static DistVector uniform(state_t n);

  std::span<const double> probs() const { return probs_; }
  double operator[](state_t i) const { return probs_[i]; }
  state_t size() const { return static_cast<state_t>(probs_.size()); }

 private:
  std::vector<double> probs_;
};

// Row-stochastic transition matrix in CSR form. Rows are sorted by target
// state and duplicate targets merged, so equality of chains is exact. The
// stationary distribution is stored alongside; instances are immutable after
// construction and safe to share across threads.
class ChainMatrix {
 public:
  // rows may be unsorted and contain duplicate targets; entries with
  // p <= 1e-300 are dropped. When pi is absent it is computed (the chain must
  // then be irreducible); when present only the residual is validated.
  static ChainMatrix build(state_t n, std::vector<std::vector<Entry>> rows, ChainFlags flags,
                           std::optional<std::vector<double>> pi = std::nullopt,
                           const Tolerances& tol = Tolerances::defaults());

  state_t n() const { return n_; }
  std::span<const Entry> row(state_t x) const {
    return {entries_.data() + row_offset_[x], entries_.data() + row_offset_[x + 1]};
  }
  std::span<const double> pi() const { return pi_; }
  double pi_at(state_t x) const { return pi_[x]; }
  const ChainFlags& flags() const { return flags_; }
  std::uint64_t nnz() const { return entries_.size(); }

  double entry(state_t x, state_t y) const;  // 0 when absent

  // Same transition structure with different claimed flags; the reversible and
  // lazy claims are re-validated.
  ChainMatrix with_flags(ChainFlags flags, const Tolerances& tol = Tolerances::defaults()) const;

  bool strongly_connected() const;

 private:
  ChainMatrix() = default;
  state_t n_ = 0;
  std::vector<std::uint32_t> row_offset_;
  std::vector<Entry> entries_;
  std::vector<double> pi_;
  ChainFlags flags_;
};

struct ReversibilityReport {
  bool reversible = false;
  double max_violation = 0.0;
};

// (P + I)/2 entrywise; stationary distribution and the other flags carry over.
ChainMatrix make_lazy(const ChainMatrix& p);

// Recomputes the stationary distribution: exact uniform for doubly stochastic
// chains, otherwise power iteration on the lazified chain with a dense linear
// solve fallback. Reducible input raises a structural error.
DistVector stationary(const ChainMatrix& p);

// mu P^t by repeated vector-matrix products; t = 0 returns mu.
DistVector evolve(const ChainMatrix& p, const DistVector& mu, std::uint64_t t);

ReversibilityReport check_reversible(const ChainMatrix& p);

// Necessary-condition check only: row entry multisets and the return
// probability sequences p_t(x,x), t <= 20 must agree across all states within
// 1e-10. Passing is not a transitivity certificate.
bool check_transitive_heuristic(const ChainMatrix& p);

// Chain file format: optional '#' comments, a "n <count>" header line, then
// "<src> <dst> <prob>" lines with 0-based states. The writer emits 17
// significant digits. Flags (lazy/reversible/regular) are detected on read.
ChainMatrix read_chain(std::istream& in);
ChainMatrix read_chain_file(const std::string& path);
void write_chain(std::ostream& out, const ChainMatrix& p);
void write_chain_file(const std::string& path, const ChainMatrix& p);

}  // namespace ixt

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ixt/chain.hpp"
#include "ixt/rng.hpp"

namespace ixt {

// Walker/Vose alias table for one fixed discrete distribution; O(1) per draw.
class AliasTable {
 public:
  AliasTable() = default;
  AliasTable(std::span<const state_t> targets, std::span<const double> probs);

  state_t sample(RngStream& rng) const {
    const std::uint32_t j = rng.below(static_cast<std::uint32_t>(accept_.size()));
    return rng.uniform() < accept_[j] ? target_[j] : alias_[j];
  }

 private:
  std::vector<double> accept_;
  std::vector<state_t> target_, alias_;
};

// Per-state alias tables for a chain plus one for its stationary distribution,
// built once and shared read-only by all sampling threads.
class ChainSampler {
 public:
  explicit ChainSampler(const ChainMatrix& p);
  state_t step(state_t x, RngStream& rng) const { return rows_[x].sample(rng); }
  state_t sample_pi(RngStream& rng) const { return pi_.sample(rng); }
  state_t n() const { return n_; }

 private:
  state_t n_ = 0;
  std::vector<AliasTable> rows_;
  AliasTable pi_;
};

}  // namespace ixt

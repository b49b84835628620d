#include "ixt/alias.hpp"

#include <numeric>

namespace ixt {

AliasTable::AliasTable(std::span<const state_t> targets, std::span<const double> probs) {
  const std::size_t k = targets.size();
  if (k == 0) fail(ErrorKind::Validation, "alias table needs at least one outcome");
  accept_.assign(k, 1.0);
  target_.assign(targets.begin(), targets.end());
  alias_.assign(targets.begin(), targets.end());

  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::vector<double> scaled(k);
  for (std::size_t i = 0; i < k; ++i) scaled[i] = probs[i] / total * static_cast<double>(k);

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < k; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = target_[l];
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // leftovers are numerically 1
  for (std::uint32_t i : small) accept_[i] = 1.0;
  for (std::uint32_t i : large) accept_[i] = 1.0;
}

ChainSampler::ChainSampler(const ChainMatrix& p) : n_(p.n()) {
  rows_.reserve(n_);
  std::vector<state_t> targets;
  std::vector<double> probs;
  for (state_t x = 0; x < n_; ++x) {
    auto row = p.row(x);
    targets.clear();
    probs.clear();
    for (const Entry& e : row) {
      targets.push_back(e.to);
      probs.push_back(e.p);
    }
    rows_.emplace_back(targets, probs);
  }
  targets.resize(n_);
  for (state_t s = 0; s < n_; ++s) targets[s] = s;
  pi_ = AliasTable(targets, std::vector<double>(p.pi().begin(), p.pi().end()));
}

}  // namespace ixt

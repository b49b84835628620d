#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ixt/chain.hpp"

namespace ixt {

enum class Family {
  cycle,
  path,
  complete,
  hypercube,
  torus,
  balanced_tree,
  random_tree,
  weighted_tree,
  two_cliques,
};

const char* family_name(Family f);

struct FamilySpec {
  Family family = Family::cycle;
  std::uint32_t n = 0;               // cycle, path, complete, random_tree, weighted_tree
  std::uint32_t dim = 0;             // torus, hypercube
  std::uint32_t side = 0;            // torus
  std::uint32_t branch = 0;          // balanced_tree
  std::uint32_t depth = 0;           // balanced_tree
  std::uint32_t small_clique = 0;    // two_cliques (0 = round(sqrt(big)))
  std::uint32_t big_clique = 0;      // two_cliques
  std::uint64_t seed = 0;            // random families

  std::string id() const;
  std::uint32_t state_count() const;  // validates parameters
};

struct GeneratedChain {
  ChainMatrix chain;
  FamilySpec spec;
  bool is_tree = false;
  // Undirected edge list with weights, used by central_node and the harness.
  std::vector<std::pair<state_t, state_t>> edges;
  std::vector<double> weights;
};

// Lazy (weighted) simple random walk on the requested graph. Transitive and
// regular flags are set for the vertex-transitive families; the stationary
// distribution is the exact degree-proportional vector.
GeneratedChain generate(const FamilySpec& spec);

// Node v such that every component of T - {v} has stationary mass <= 1/2;
// smallest index among the valid nodes. Input must be a tree.
state_t central_node(const ChainMatrix& chain, std::span<const std::pair<state_t, state_t>> edges);

}  // namespace ixt

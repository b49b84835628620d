#include "ixt/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ixt/rng.hpp"

namespace ixt {

const char* family_name(Family f) {
  switch (f) {
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::complete: return "complete";
    case Family::hypercube: return "hypercube";
    case Family::torus: return "torus";
    case Family::balanced_tree: return "btree";
    case Family::random_tree: return "rtree";
    case Family::weighted_tree: return "wtree";
    case Family::two_cliques: return "twocliques";
  }
  return "?";
}

std::string FamilySpec::id() const {
  switch (family) {
    case Family::cycle:
    case Family::path:
    case Family::complete:
      return std::string(family_name(family)) + "-" + std::to_string(n);
    case Family::hypercube:
      return "hypercube-" + std::to_string(dim);
    case Family::torus:
      return "torus-" + std::to_string(dim) + "x" + std::to_string(side);
    case Family::balanced_tree:
      return "btree-" + std::to_string(branch) + "x" + std::to_string(depth);
    case Family::random_tree:
      return "rtree-" + std::to_string(n) + "-s" + std::to_string(seed);
    case Family::weighted_tree:
      return "wtree-" + std::to_string(n) + "-s" + std::to_string(seed);
    case Family::two_cliques: {
      std::uint32_t s = small_clique ? small_clique
                                     : static_cast<std::uint32_t>(std::lround(std::sqrt(big_clique)));
      return "twocliques-" + std::to_string(s) + "x" + std::to_string(big_clique);
    }
  }
  return "?";
}

std::uint32_t FamilySpec::state_count() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::Validation, what);
  };
  switch (family) {
    case Family::cycle:
    case Family::path:
    case Family::complete:
      need(n >= 1, "family needs n >= 1");
      return n;
    case Family::hypercube:
      need(dim >= 1 && dim <= 24, "hypercube needs 1 <= d <= 24");
      return 1u << dim;
    case Family::torus: {
      need(dim >= 1, "torus needs d >= 1");
      need(side >= 2, "torus needs side >= 2");
      double states = std::pow(static_cast<double>(side), static_cast<double>(dim));
      need(states <= 1 << 24, "torus state count too large");
      std::uint32_t v = 1;
      for (std::uint32_t i = 0; i < dim; ++i) v *= side;
      return v;
    }
    case Family::balanced_tree: {
      need(branch >= 2, "balanced tree needs branch >= 2");
      std::uint64_t v = 0, level = 1;
      for (std::uint32_t d = 0; d <= depth; ++d) {
        v += level;
        level *= branch;
        need(v <= (1u << 24), "balanced tree too large");
      }
      return static_cast<std::uint32_t>(v);
    }
    case Family::random_tree:
    case Family::weighted_tree:
      need(n >= 1, "tree needs n >= 1");
      return n;
    case Family::two_cliques: {
      need(big_clique >= 2, "two_cliques needs big clique size >= 2");
      std::uint32_t s = small_clique ? small_clique
                                     : static_cast<std::uint32_t>(std::lround(std::sqrt(big_clique)));
      need(s >= 1, "two_cliques needs small clique size >= 1");
      return s + big_clique;
    }
  }
  fail(ErrorKind::Validation, "unknown family");
}

namespace {

struct GraphBuild {
  std::uint32_t n = 0;
  std::vector<std::pair<state_t, state_t>> edges;  // undirected, may repeat for multi-edges
  std::vector<double> weights;

  void edge(state_t a, state_t b, double w = 1.0) {
    edges.push_back({a, b});
    weights.push_back(w);
  }
};

// Uniform random tree on n nodes decoded from a random Pruefer sequence.
std::vector<std::pair<state_t, state_t>> pruefer_tree(std::uint32_t n, RngStream& rng) {
  std::vector<std::pair<state_t, state_t>> edges;
  if (n < 2) return edges;
  if (n == 2) {
    edges.push_back({0, 1});
    return edges;
  }
  std::vector<state_t> code(n - 2);
  for (auto& v : code) v = rng.below(n);
  std::vector<std::uint32_t> degree(n, 1);
  for (state_t v : code) ++degree[v];
  state_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  state_t leaf = ptr;
  for (state_t v : code) {
    edges.push_back({leaf, v});
    if (--degree[v] == 1 && v < ptr) {
      leaf = v;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back({leaf, static_cast<state_t>(n - 1)});
  return edges;
}

GraphBuild build_graph(const FamilySpec& spec, bool& is_tree) {
  GraphBuild g;
  g.n = spec.state_count();
  is_tree = false;
  switch (spec.family) {
    case Family::cycle: {
      if (g.n == 1) break;
      if (g.n == 2) {
        g.edge(0, 1, 2.0);  // both ring directions coincide, merged
        break;
      }
      for (state_t v = 0; v < g.n; ++v) g.edge(v, (v + 1) % g.n);
      break;
    }
    case Family::path: {
      is_tree = g.n >= 1;
      for (state_t v = 0; v + 1 < g.n; ++v) g.edge(v, v + 1);
      break;
    }
    case Family::complete: {
      for (state_t a = 0; a < g.n; ++a)
        for (state_t b = a + 1; b < g.n; ++b) g.edge(a, b);
      break;
    }
    case Family::hypercube: {
      for (state_t v = 0; v < g.n; ++v)
        for (std::uint32_t bit = 0; bit < spec.dim; ++bit) {
          state_t u = v ^ (1u << bit);
          if (u > v) g.edge(v, u);
        }
      break;
    }
    case Family::torus: {
      const std::uint32_t l = spec.side, d = spec.dim;
      std::vector<std::uint32_t> stride(d, 1);
      for (std::uint32_t i = 1; i < d; ++i) stride[i] = stride[i - 1] * l;
      for (state_t v = 0; v < g.n; ++v) {
        for (std::uint32_t i = 0; i < d; ++i) {
          std::uint32_t c = (v / stride[i]) % l;
          state_t base = v - c * stride[i];
          state_t up = base + ((c + 1) % l) * stride[i];
          if (l == 2) {
            // +1 and -1 coincide: one merged edge carrying both directions
            if (up > v) g.edge(v, up, 2.0);
          } else {
            if (up > v) g.edge(v, up);
            state_t down = base + ((c + l - 1) % l) * stride[i];
            if (down > v) g.edge(v, down);
          }
        }
      }
      break;
    }
    case Family::balanced_tree: {
      is_tree = true;
      for (state_t v = 1; v < g.n; ++v) g.edge((v - 1) / spec.branch, v);
      break;
    }
    case Family::random_tree:
    case Family::weighted_tree: {
      is_tree = true;
      RngStream rng = RngStream::keyed(spec.seed, rng_tag::family,
                                       static_cast<std::uint64_t>(spec.family), spec.n);
      auto edges = pruefer_tree(g.n, rng);
      for (auto [a, b] : edges) {
        double w = 1.0;
        if (spec.family == Family::weighted_tree)
          w = std::pow(100.0, rng.uniform());  // log-uniform on [1, 100]
        g.edge(a, b, w);
      }
      break;
    }
    case Family::two_cliques: {
      std::uint32_t s = spec.small_clique
                            ? spec.small_clique
                            : static_cast<std::uint32_t>(std::lround(std::sqrt(spec.big_clique)));
      std::uint32_t m = spec.big_clique;
      for (state_t a = 0; a < s; ++a)
        for (state_t b = a + 1; b < s; ++b) g.edge(a, b);
      for (state_t a = 0; a < m; ++a)
        for (state_t b = a + 1; b < m; ++b) g.edge(s + a, s + b);
      g.edge(0, s);  // the bridge
      break;
    }
  }
  return g;
}

}  // namespace

GeneratedChain generate(const FamilySpec& spec) {
  bool is_tree = false;
  GraphBuild g = build_graph(spec, is_tree);
  const std::uint32_t n = g.n;

  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    degree[g.edges[i].first] += g.weights[i];
    degree[g.edges[i].second] += g.weights[i];
  }

  std::vector<std::vector<Entry>> rows(n);
  if (n == 1) {
    rows[0].push_back({0, 1.0});  // isolated vertex: identity chain
  } else {
    for (state_t v = 0; v < n; ++v)
      if (degree[v] <= 0.0) fail(ErrorKind::Validation, "generated graph has an isolated vertex");
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      auto [a, b] = g.edges[i];
      double w = g.weights[i];
      rows[a].push_back({b, 0.5 * w / degree[a]});
      rows[b].push_back({a, 0.5 * w / degree[b]});
    }
    for (state_t v = 0; v < n; ++v) rows[v].push_back({v, 0.5});
  }

  double total = n == 1 ? 1.0 : std::accumulate(degree.begin(), degree.end(), 0.0);
  std::vector<double> pi(n, 1.0);
  if (n > 1)
    for (state_t v = 0; v < n; ++v) pi[v] = degree[v] / total;

  ChainFlags flags;
  flags.lazy = true;
  flags.reversible = true;
  switch (spec.family) {
    case Family::cycle:
    case Family::complete:
    case Family::hypercube:
    case Family::torus:
      flags.transitive = true;
      break;
    default:
      break;
  }
  if (n == 1) flags.transitive = true;
  flags.regular = true;
  for (state_t v = 1; v < n; ++v)
    if (std::abs(degree[v] - degree[0]) > 1e-12) {
      flags.regular = false;
      break;
    }

  GeneratedChain out{ChainMatrix::build(n, std::move(rows), flags, std::move(pi)), spec, is_tree,
                     std::move(g.edges), std::move(g.weights)};
  return out;
}

state_t central_node(const ChainMatrix& chain,
                     std::span<const std::pair<state_t, state_t>> edges) {
  const state_t n = chain.n();
  if (n == 1) return 0;
  if (edges.size() != n - 1) fail(ErrorKind::Structural, "not a tree: wrong edge count");

  std::vector<std::vector<state_t>> adj(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b) fail(ErrorKind::Structural, "not a tree: bad edge");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  {
    std::vector<char> seen(n, 0);
    std::vector<state_t> stack{0};
    seen[0] = 1;
    state_t count = 1;
    while (!stack.empty()) {
      state_t v = stack.back();
      stack.pop_back();
      for (state_t u : adj[v])
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
    }
    if (count != n) fail(ErrorKind::Structural, "not a tree: disconnected");
  }

  // Smallest v whose removal leaves only components of stationary mass <= 1/2.
  // Unit-weight trees can split into exact halves, so the comparison needs
  // rounding slack.
  constexpr double kHalfSlack = 1e-12;
  std::vector<char> seen(n);
  std::vector<state_t> stack;
  for (state_t v = 0; v < n; ++v) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[v] = 1;
    bool ok = true;
    for (state_t root : adj[v]) {
      if (seen[root]) continue;
      double mass = 0;
      stack.assign(1, root);
      seen[root] = 1;
      while (!stack.empty()) {
        state_t u = stack.back();
        stack.pop_back();
        mass += chain.pi_at(u);
        for (state_t w : adj[u])
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      if (mass > 0.5 + kHalfSlack) {
        ok = false;
        break;
      }
    }
    if (ok) return v;
  }
  fail(ErrorKind::Structural, "no central node found (input is not a valid weighted tree)");
}

}  // namespace ixt

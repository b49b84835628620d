#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ixt/families.hpp"

using namespace ixt;

TEST_CASE("cycle(4): lazy walk rows") {
  GeneratedChain g = generate({.family = Family::cycle, .n = 4});
  const ChainMatrix& c = g.chain;
  CHECK(c.n() == 4);
  for (state_t v = 0; v < 4; ++v) {
    CHECK(c.entry(v, v) == doctest::Approx(0.5));
    CHECK(c.entry(v, (v + 1) % 4) == doctest::Approx(0.25));
    CHECK(c.entry(v, (v + 3) % 4) == doctest::Approx(0.25));
  }
  CHECK(c.flags().lazy);
  CHECK(c.flags().reversible);
  CHECK(c.flags().transitive);
  CHECK(c.flags().regular);
}

TEST_CASE("complete(4): diagonal 1/2 and 1/6 elsewhere") {
  GeneratedChain g = generate({.family = Family::complete, .n = 4});
  for (state_t v = 0; v < 4; ++v) {
    CHECK(g.chain.entry(v, v) == doctest::Approx(0.5));
    for (state_t u = 0; u < 4; ++u)
      if (u != v) CHECK(g.chain.entry(v, u) == doctest::Approx(1.0 / 6));
  }
}

TEST_CASE("torus(2,3): nine states, 1/8 to each of four neighbors") {
  GeneratedChain g = generate({.family = Family::torus, .dim = 2, .side = 3});
  CHECK(g.chain.n() == 9);
  for (state_t v = 0; v < 9; ++v) {
    CHECK(g.chain.entry(v, v) == doctest::Approx(0.5));
    CHECK(g.chain.row(v).size() == 5);
    for (const Entry& e : g.chain.row(v))
      if (e.to != v) CHECK(e.p == doctest::Approx(0.125));
  }
  CHECK(g.chain.flags().transitive);
}

TEST_CASE("torus with side 2 merges the doubled directions") {
  GeneratedChain g = generate({.family = Family::torus, .dim = 3, .side = 2});
  CHECK(g.chain.n() == 8);
  // merged edge carries 2/(2d) = 1/3 before lazification -> 1/6 after
  for (state_t v = 0; v < 8; ++v) {
    CHECK(g.chain.row(v).size() == 4);  // diagonal + 3 neighbors
    for (const Entry& e : g.chain.row(v))
      if (e.to != v) CHECK(e.p == doctest::Approx(1.0 / 6));
  }
  // identical to hypercube(3)
  GeneratedChain h = generate({.family = Family::hypercube, .dim = 3});
  for (state_t v = 0; v < 8; ++v)
    for (state_t u = 0; u < 8; ++u)
      CHECK(g.chain.entry(v, u) == doctest::Approx(h.chain.entry(v, u)));
}

TEST_CASE("torus(1,n) is the cycle") {
  GeneratedChain t = generate({.family = Family::torus, .dim = 1, .side = 6});
  GeneratedChain c = generate({.family = Family::cycle, .n = 6});
  for (state_t v = 0; v < 6; ++v)
    for (state_t u = 0; u < 6; ++u) CHECK(t.chain.entry(v, u) == c.chain.entry(v, u));
}

TEST_CASE("generated chains pass the core contracts") {
  std::vector<FamilySpec> specs = {
      {.family = Family::cycle, .n = 9},
      {.family = Family::path, .n = 7},
      {.family = Family::complete, .n = 8},
      {.family = Family::hypercube, .dim = 4},
      {.family = Family::torus, .dim = 2, .side = 4},
      {.family = Family::balanced_tree, .branch = 3, .depth = 2},
      {.family = Family::random_tree, .n = 40, .seed = 9},
      {.family = Family::weighted_tree, .n = 40, .seed = 9},
      {.family = Family::two_cliques, .small_clique = 4, .big_clique = 16},
  };
  for (const auto& s : specs) {
    GeneratedChain g = generate(s);
    INFO(s.id());
    CHECK(g.chain.flags().lazy);
    CHECK(check_reversible(g.chain).reversible);
    CHECK(g.chain.strongly_connected());
  }
}

TEST_CASE("generation is deterministic in (family, params, seed)") {
  FamilySpec s{.family = Family::weighted_tree, .n = 25, .seed = 42};
  GeneratedChain a = generate(s), b = generate(s);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i] == b.edges[i]);
    CHECK(a.weights[i] == b.weights[i]);
  }
  GeneratedChain c = generate({.family = Family::weighted_tree, .n = 25, .seed = 43});
  bool same = true;
  for (std::size_t i = 0; i < a.edges.size() && same; ++i) same = a.edges[i] == c.edges[i];
  CHECK_FALSE(same);
}

TEST_CASE("weighted tree weights live in [1, 100]") {
  GeneratedChain g = generate({.family = Family::weighted_tree, .n = 60, .seed = 1});
  for (double w : g.weights) {
    CHECK(w >= 1.0);
    CHECK(w <= 100.0);
  }
}

TEST_CASE("central node: path, star, and the component-mass oracle") {
  GeneratedChain p3 = generate({.family = Family::path, .n = 3});
  CHECK(central_node(p3.chain, p3.edges) == 1);

  // star with 5 leaves via balanced tree branch 5 depth 1 (hub = 0)
  GeneratedChain star = generate({.family = Family::balanced_tree, .branch = 5, .depth = 1});
  CHECK(star.chain.n() == 6);
  CHECK(central_node(star.chain, star.edges) == 0);

  GeneratedChain rt = generate({.family = Family::random_tree, .n = 50, .seed = 3});
  state_t v = central_node(rt.chain, rt.edges);
  // oracle: exhaustive component masses of T - {v}
  std::vector<std::vector<state_t>> adj(rt.chain.n());
  for (auto [a, b] : rt.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(rt.chain.n(), 0);
  seen[v] = 1;
  for (state_t root = 0; root < rt.chain.n(); ++root) {
    if (seen[root]) continue;
    double mass = 0;
    std::vector<state_t> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      state_t u = stack.back();
      stack.pop_back();
      mass += rt.chain.pi_at(u);
      for (state_t w : adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    CHECK(mass <= 0.5 + 1e-9);
  }
}

TEST_CASE("a central node exists on 200 random trees") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>((i * 7919) % 199);
    FamilySpec s{.family = i % 2 ? Family::weighted_tree : Family::random_tree,
                 .n = n,
                 .seed = 1000 + i};
    GeneratedChain g = generate(s);
    REQUIRE(g.edges.size() == g.chain.n() - 1);
    CHECK_NOTHROW(central_node(g.chain, g.edges));
  }
}

TEST_CASE("central node rejects non-trees") {
  GeneratedChain cyc = generate({.family = Family::cycle, .n = 5});
  CHECK_THROWS_AS(central_node(cyc.chain, cyc.edges), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate({.family = Family::torus, .dim = 2, .side = 1}), Error);
  CHECK_THROWS_AS(generate({.family = Family::torus, .dim = 0, .side = 4}), Error);
  CHECK_THROWS_AS(generate({.family = Family::cycle, .n = 0}), Error);
  CHECK_THROWS_AS(generate({.family = Family::balanced_tree, .branch = 1, .depth = 2}), Error);
  CHECK_THROWS_AS(generate({.family = Family::two_cliques, .big_clique = 1}), Error);
}

TEST_CASE("ids are stable") {
  CHECK(FamilySpec{.family = Family::cycle, .n = 8}.id() == "cycle-8");
  CHECK(FamilySpec{.family = Family::torus, .dim = 2, .side = 16}.id() == "torus-2x16");
  CHECK(FamilySpec{.family = Family::two_cliques, .big_clique = 64}.id() == "twocliques-8x64");
}

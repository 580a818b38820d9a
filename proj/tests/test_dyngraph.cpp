#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "trirem/dyngraph.hpp"
#include "trirem/errors.hpp"

using namespace trirem;

TEST_SUITE("dyngraph") {
  TEST_CASE("complete graph counts") {
    for (Vertex n = 0; n <= 9; ++n) {
      const auto g = Graph::complete(n);
      CHECK(g.edge_count() == choose2(n));
      CHECK(g.triangle_count() == choose3(n));
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) CHECK(g.codegree(u, v) == n - 2);
    }
    const auto k4 = Graph::complete(4);
    CHECK(k4.edge_count() == 6);
    CHECK(k4.triangle_count() == 4);
    CHECK(Graph::complete(3).triangle_count() == 1);
    CHECK(Graph::complete(2).triangle_count() == 0);
    CHECK(Graph::complete(2).edge_count() == 1);
  }

  TEST_CASE("pair ids are a bijection") {
    for (std::uint64_t n : {2U, 3U, 7U, 64U, 65U}) {
      PairId expect = 0;
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) {
          CHECK(pair_id(n, u, v) == expect);
          CHECK(pair_id(n, v, u) == expect);
          CHECK(pair_from_id(n, expect) == std::pair<Vertex, Vertex>{u, v});
          ++expect;
        }
      CHECK(expect == choose2(n));
    }
  }

  TEST_CASE("delete_edge examples") {
    auto k4 = Graph::complete(4);
    CHECK(k4.delete_edge(0, 1) == std::vector<Vertex>{2, 3});
    CHECK(k4.triangle_count() == 2);
    CHECK(k4.codegree(0, 2) == 1);

    auto k3 = Graph::complete(3);
    CHECK(k3.delete_edge(0, 1) == std::vector<Vertex>{2});
    CHECK(k3.triangle_count() == 0);

    const std::vector<std::pair<Vertex, Vertex>> two = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    auto g = Graph::from_edges(6, two);
    CHECK(g.triangle_count() == 2);
    const auto y34 = g.codegree(3, 4);
    CHECK(g.delete_edge(0, 1) == std::vector<Vertex>{2});
    CHECK(g.triangle_count() == 1);
    CHECK(g.codegree(3, 4) == y34);
  }

  TEST_CASE("delete_edge rejects non-edges") {
    auto g = Graph::complete(4);
    g.delete_edge(0, 1);
    CHECK_THROWS_AS(g.delete_edge(0, 1), PreconditionError);
    CHECK_THROWS_AS(g.delete_edge(2, 2), PreconditionError);
    CHECK_THROWS_AS(g.delete_edge(0, 9), PreconditionError);
  }

  TEST_CASE("recount examples") {
    CHECK(Graph::complete(5).recount_triangles() == 10);
    auto g = Graph::complete(4);
    g.delete_edge(0, 1);
    CHECK(g.recount_triangles() == 2);
    CHECK(Graph::empty(7).recount_triangles() == 0);
  }

  TEST_CASE("codegree and degree examples") {
    const auto k5 = Graph::complete(5);
    for (Vertex u = 0; u < 5; ++u) {
      CHECK(k5.degree(u) == 4);
      for (Vertex v = 0; v < 5; ++v)
        if (u != v) CHECK(k5.codegree(u, v) == 3);
    }
    CHECK_THROWS_AS((void)k5.codegree(1, 1), PreconditionError);

    auto k4 = Graph::complete(4);
    k4.delete_edge(0, 1);
    CHECK(k4.codegree(0, 2) == 1);

    const std::vector<std::pair<Vertex, Vertex>> star = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const auto s = Graph::from_edges(5, star);
    for (Vertex a = 1; a <= 4; ++a)
      for (Vertex b = a + 1; b <= 4; ++b) CHECK(s.codegree(a, b) == 1);
    CHECK(s.degree(0) == 4);
  }

  TEST_CASE("from_edges validation") {
    const std::vector<std::pair<Vertex, Vertex>> loop = {{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), PreconditionError);
    const std::vector<std::pair<Vertex, Vertex>> far = {{0, 3}};
    CHECK_THROWS_AS(Graph::from_edges(3, far), PreconditionError);
  }

  TEST_CASE("random deletion sequences keep every maintained quantity exact") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng.uniform_below(12));
      const double q = 0.2 + 0.8 * rng.uniform01();
      auto edges = oracle::random_edges(n, q, rng);
      auto g = Graph::from_edges(static_cast<Vertex>(n), edges);
      oracle::Matrix m = oracle::Matrix::from(g);
      shuffle(std::span(edges), rng);
      for (const auto& [u, v] : edges) {
        std::vector<Vertex> expect;
        for (int x = 0; x < n; ++x)
          if (m.adj[u][x] && m.adj[v][x]) expect.push_back(static_cast<Vertex>(x));
        const auto before = g.edge_count();
        const auto got = g.delete_edge(u, v);
        m.adj[u][v] = m.adj[v][u] = 0;
        REQUIRE(got == expect);
        REQUIRE(std::is_sorted(got.begin(), got.end()));
        REQUIRE(g.edge_count() + 1 == before);
        REQUIRE(g.triangle_count() == g.recount_triangles());
        REQUIRE(g.triangle_count() == m.triangles().size());
        std::uint64_t sum_y = 0;
        for (const auto& [a, b] : g.edges()) sum_y += g.codegree(a, b);
        REQUIRE(sum_y == 3 * g.triangle_count());
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            REQUIRE(g.codegree(static_cast<Vertex>(a), static_cast<Vertex>(b)) ==
                    static_cast<std::uint32_t>(m.codegree(a, b)));
        g.check_invariants();
      }
      CHECK(g.edge_count() == 0);
    }
  }

  TEST_CASE("decrement total over a full triangle-removal run from K_n") {
    for (Vertex n : {3U, 6U, 10U, 17U}) {
      auto g = Graph::complete(n);
      // Greedy lexicographic removal to termination.
      for (;;) {
        bool removed = false;
        for (const auto& [u, v] : g.edges()) {
          auto common = std::vector<Vertex>{};
          g.common_neighbors(u, v, common);
          if (common.empty()) continue;
          const Vertex w = common.front();
          g.delete_edge(u, v);
          g.delete_edge(u, w);
          g.delete_edge(v, w);
          removed = true;
          break;
        }
        if (!removed) break;
      }
      CHECK(g.recount_triangles() == 0);
      // Every triangle of K_n is destroyed exactly once, costing two
      // decrements on pairs that were still edges.
      CHECK(g.edge_pair_decrements() == 2 * choose3(n));
      CHECK(g.edge_pair_decrements() <= 6 * choose3(n));
    }
  }
}

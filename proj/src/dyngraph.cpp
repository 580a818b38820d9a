#include "trirem/dyngraph.hpp"

#include <algorithm>
#include <string>

#include "trirem/errors.hpp"

namespace trirem {

std::pair<Vertex, Vertex> pair_from_id(std::uint64_t n, PairId id) noexcept {
  // Largest u with row_start(u) <= id.
  std::uint64_t lo = 0;
  std::uint64_t hi = n - 1;
  while (lo + 1 < hi) {
    const std::uint64_t mid = (lo + hi) / 2;
    const std::uint64_t start = mid * n - mid * (mid + 1) / 2;
    if (start <= id) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const std::uint64_t u = lo;
  const std::uint64_t start = u * n - u * (u + 1) / 2;
  return {static_cast<Vertex>(u), static_cast<Vertex>(id - start + u + 1)};
}

Graph::Graph(Vertex n)
    : n_(n),
      words_((static_cast<std::size_t>(n) + 63) / 64),
      adj_(static_cast<std::size_t>(n) * words_, 0),
      codeg_(choose2(n), 0),
      degree_(n, 0) {}

Graph Graph::empty(Vertex n) { return Graph(n); }

Graph Graph::complete(Vertex n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v) g.set_bit(u, v);
    }
  }
  std::fill(g.degree_.begin(), g.degree_.end(), n == 0 ? 0 : n - 1);
  std::fill(g.codeg_.begin(), g.codeg_.end(), n < 2 ? 0 : n - 2);
  g.edge_count_ = choose2(n);
  g.triangles_ = choose3(n);
  return g;
}

Graph Graph::from_edges(Vertex n, std::span<const std::pair<Vertex, Vertex>> edges) {
  Graph g(n);
  for (auto [u, v] : edges) {
    g.check_vertex(u);
    g.check_vertex(v);
    if (u == v) throw PreconditionError("self-loop " + std::to_string(u));
    g.set_bit(u, v);
    g.set_bit(v, u);
  }
  g.rebuild_counts();
  return g;
}

void Graph::rebuild_counts() {
  edge_count_ = 0;
  for (Vertex u = 0; u < n_; ++u) {
    std::uint32_t d = 0;
    for (auto w : row(u)) d += static_cast<std::uint32_t>(std::popcount(w));
    degree_[u] = d;
    edge_count_ += d;
  }
  edge_count_ /= 2;
  std::uint64_t sum_over_edges = 0;
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v = u + 1; v < n_; ++v) {
      const auto c = recount_codegree(u, v);
      codeg_[pair_id(n_, u, v)] = c;
      if (test_bit(u, v)) sum_over_edges += c;
    }
  }
  triangles_ = sum_over_edges / 3;
}

void Graph::check_vertex(Vertex u) const {
  if (u >= n_) {
    throw PreconditionError("vertex " + std::to_string(u) + " out of range [0," +
                            std::to_string(n_) + ")");
  }
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  return u != v && test_bit(u, v);
}

std::uint32_t Graph::degree(Vertex u) const {
  check_vertex(u);
  return degree_[u];
}

std::uint32_t Graph::codegree(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw PreconditionError("codegree needs two distinct vertices");
  return codeg_[pair_id(n_, u, v)];
}

void Graph::common_neighbors(Vertex u, Vertex v, std::vector<Vertex>& out) const {
  const auto* ru = adj_.data() + static_cast<std::size_t>(u) * words_;
  const auto* rv = adj_.data() + static_cast<std::size_t>(v) * words_;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = ru[w] & rv[w];
    while (bits) {
      out.push_back(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
}

std::uint32_t Graph::recount_codegree(Vertex u, Vertex v) const {
  const auto* ru = adj_.data() + static_cast<std::size_t>(u) * words_;
  const auto* rv = adj_.data() + static_cast<std::size_t>(v) * words_;
  std::uint32_t c = 0;
  for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::uint32_t>(std::popcount(ru[w] & rv[w]));
  return c;
}

void Graph::delete_edge(Vertex u, Vertex v, std::vector<Vertex>& common) {
  check_vertex(u);
  check_vertex(v);
  if (u == v || !test_bit(u, v)) {
    throw PreconditionError("delete_edge: (" + std::to_string(u) + "," + std::to_string(v) +
                            ") is not an edge");
  }
  common.clear();
  common_neighbors(u, v, common);

  clear_bit(u, v);
  clear_bit(v, u);
  --degree_[u];
  --degree_[v];
  --edge_count_;
  triangles_ -= common.size();
  edge_pair_decrements_ += 2 * common.size();

  // v no longer counts toward Y[u][x] for x in N_v, nor u toward Y[v][x]
  // for x in N_u.
  const std::uint64_t n = n_;
  auto drop = [&](Vertex a, Vertex b) {
    // For every x adjacent to b: Y[a][x] -= 1.
    const std::uint64_t row_a = static_cast<std::uint64_t>(a) * n - static_cast<std::uint64_t>(a) * (a + 1) / 2;
    for_each_bit(row(b), [&](Vertex x) {
      if (x == a) return;
      if (x > a) {
        --codeg_[row_a + (x - a - 1)];
      } else {
        --codeg_[static_cast<std::uint64_t>(x) * n - static_cast<std::uint64_t>(x) * (x + 1) / 2 + (a - x - 1)];
      }
    });
  };
  drop(u, v);
  drop(v, u);
}

std::vector<Vertex> Graph::delete_edge(Vertex u, Vertex v) {
  std::vector<Vertex> common;
  delete_edge(u, v, common);
  return common;
}

std::uint64_t Graph::recount_triangles() const {
  std::uint64_t total = 0;
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v = u + 1; v < n_; ++v) {
      if (!test_bit(u, v)) continue;
      // Count w > v adjacent to both.
      const auto* ru = adj_.data() + static_cast<std::size_t>(u) * words_;
      const auto* rv = adj_.data() + static_cast<std::size_t>(v) * words_;
      const std::size_t first = (static_cast<std::size_t>(v) + 1) / 64;
      for (std::size_t w = first; w < words_; ++w) {
        std::uint64_t bits = ru[w] & rv[w];
        if (w == first) {
          const unsigned shift = (v + 1) % 64;
          bits &= ~std::uint64_t{0} << shift;
        }
        total += static_cast<std::uint64_t>(std::popcount(bits));
      }
    }
  }
  return total;
}

std::vector<Vertex> Graph::neighbors(Vertex u) const {
  check_vertex(u);
  std::vector<Vertex> out;
  for_each_bit(row(u), [&](Vertex x) { out.push_back(x); });
  return out;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u) {
    for_each_bit(row(u), [&](Vertex x) {
      if (x > u) out.emplace_back(u, x);
    });
  }
  return out;
}

void Graph::check_invariants() const {
  std::uint64_t edges = 0;
  std::uint64_t sum_y = 0;
  for (Vertex u = 0; u < n_; ++u) {
    if (test_bit(u, u)) throw InvariantError("self-loop at " + std::to_string(u));
    std::uint32_t d = 0;
    for (auto w : row(u)) d += static_cast<std::uint32_t>(std::popcount(w));
    if (d != degree_[u]) throw InvariantError("degree mismatch at " + std::to_string(u));
    edges += d;
    for (Vertex v = u + 1; v < n_; ++v) {
      if (test_bit(u, v) != test_bit(v, u)) {
        throw InvariantError("asymmetric adjacency " + std::to_string(u) + "," + std::to_string(v));
      }
      const auto y = codeg_[pair_id(n_, u, v)];
      if (y != recount_codegree(u, v)) {
        throw InvariantError("codegree mismatch at (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      if (test_bit(u, v)) sum_y += y;
    }
  }
  if (edges / 2 != edge_count_) throw InvariantError("edge count mismatch");
  if (sum_y != 3 * triangles_) throw InvariantError("Q != (1/3) sum of edge co-degrees");
  if (recount_triangles() != triangles_) throw InvariantError("Q != recount");
}

}  // namespace trirem

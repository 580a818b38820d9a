#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace trirem {

using Vertex = std::uint32_t;
using PairId = std::uint64_t;

/// Index of the unordered pair {u, v} (u < v) in the flat upper-triangular
/// layout: row u holds pairs (u, u+1) ... (u, n-1).
constexpr PairId pair_id(std::uint64_t n, std::uint64_t u, std::uint64_t v) noexcept {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

constexpr std::uint64_t choose2(std::uint64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }
constexpr std::uint64_t choose3(std::uint64_t n) noexcept {
  return n < 3 ? 0 : n * (n - 1) / 2 * (n - 2) / 3;
}

/// Inverse of pair_id.
std::pair<Vertex, Vertex> pair_from_id(std::uint64_t n, PairId id) noexcept;

/// Dense simple graph on [0, n) that supports edge deletion and keeps the
/// co-degree of every vertex pair (adjacent or not), the degree of every
/// vertex and the number of triangles exact at all times.
///
/// Adjacency is one bitset row of ceil(n/64) words per vertex. Co-degrees
/// live in a flat upper-triangular array of 32-bit counters indexed by
/// pair_id.
class Graph {
 public:
  Graph() = default;

  static Graph complete(Vertex n);
  static Graph empty(Vertex n);
  static Graph from_edges(Vertex n, std::span<const std::pair<Vertex, Vertex>> edges);

  Vertex n() const noexcept { return n_; }
  std::uint64_t edge_count() const noexcept { return edge_count_; }
  std::uint64_t triangle_count() const noexcept { return triangles_; }

  bool has_edge(Vertex u, Vertex v) const;
  std::uint32_t degree(Vertex u) const;
  /// Maintained |N_u ∩ N_v|; throws PreconditionError when u == v.
  std::uint32_t codegree(Vertex u, Vertex v) const;
  /// Unchecked co-degree lookup by pair index.
  std::uint32_t codegree_at(PairId id) const noexcept { return codeg_[id]; }

  /// Removes uv. Writes N_u ∩ N_v (as it was before the deletion, ascending)
  /// into `common`. Throws PreconditionError if uv is not an edge.
  void delete_edge(Vertex u, Vertex v, std::vector<Vertex>& common);
  std::vector<Vertex> delete_edge(Vertex u, Vertex v);

  /// Triangle count by bitset enumeration, independent of the maintained Q.
  std::uint64_t recount_triangles() const;
  /// |N_u ∩ N_v| recomputed from adjacency.
  std::uint32_t recount_codegree(Vertex u, Vertex v) const;

  /// Appends N_u ∩ N_v in ascending order.
  void common_neighbors(Vertex u, Vertex v, std::vector<Vertex>& out) const;
  std::vector<Vertex> neighbors(Vertex u) const;
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// Raw adjacency row (words_per_row() words).
  std::span<const std::uint64_t> row(Vertex u) const noexcept {
    return {adj_.data() + static_cast<std::size_t>(u) * words_, words_};
  }
  std::size_t words_per_row() const noexcept { return words_; }

  /// Co-degree decrements applied to pairs that were edges at the time, i.e.
  /// two per destroyed triangle. Used to audit run-level conservation.
  std::uint64_t edge_pair_decrements() const noexcept { return edge_pair_decrements_; }

  /// Full O(n^3 / 64) consistency check of every maintained quantity.
  /// Throws InvariantError naming the first mismatch.
  void check_invariants() const;

 private:
  explicit Graph(Vertex n);
  void check_vertex(Vertex u) const;
  void set_bit(Vertex u, Vertex v) noexcept {
    adj_[static_cast<std::size_t>(u) * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }
  void clear_bit(Vertex u, Vertex v) noexcept {
    adj_[static_cast<std::size_t>(u) * words_ + v / 64] &= ~(std::uint64_t{1} << (v % 64));
  }
  bool test_bit(Vertex u, Vertex v) const noexcept {
    return (adj_[static_cast<std::size_t>(u) * words_ + v / 64] >> (v % 64)) & 1U;
  }
  void rebuild_counts();

  Vertex n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint32_t> codeg_;
  std::vector<std::uint32_t> degree_;
  std::uint64_t edge_count_ = 0;
  std::uint64_t triangles_ = 0;
  std::uint64_t edge_pair_decrements_ = 0;
};

/// Calls f(v) for every set bit of the word span, ascending.
template <class F>
void for_each_bit(std::span<const std::uint64_t> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      f(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(b)));
      bits &= bits - 1;
    }
  }
}

}  // namespace trirem

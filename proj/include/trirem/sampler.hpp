#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "trirem/dyngraph.hpp"
#include "trirem/rng.hpp"

namespace trirem {

/// Exact integer-weight sampler over a fixed number of slots.
///
/// Cumulative sums are kept in a tree with fan-out 64: level 0 holds the
/// slot weights, each node of level k+1 holds the sum of 64 consecutive
/// nodes of level k. Updates touch one node per level (4 levels cover
/// 2^24 slots); a draw descends from the root scanning at most 64 children
/// per level. All arithmetic is on integers, so draws are bit-exact.
class WeightedSampler {
 public:
  WeightedSampler() = default;
  explicit WeightedSampler(std::uint64_t capacity);

  std::uint64_t capacity() const noexcept { return weights_.size(); }
  std::uint64_t total() const noexcept { return levels_.empty() ? 0 : levels_.back()[0]; }
  std::uint32_t weight(std::uint64_t slot) const;

  /// Replaces the weight of `slot`. Throws PreconditionError if out of range.
  void set_weight(std::uint64_t slot, std::uint32_t w);

  /// The unique slot i with cum(i-1) <= r < cum(i). Throws EmptySamplerError
  /// if total() == 0 and PreconditionError if r >= total().
  std::uint64_t sample_index(std::uint64_t r) const;
  /// Real-valued variant: r in [0, total()) is floored first.
  std::uint64_t sample_index(double r) const;

  std::uint64_t draw(SplitMix64& rng) const { return sample_index(rng.uniform_below(total())); }

  /// Lowers the weight of `slot` by one. Unchecked: slot must be in range
  /// with positive weight. This is the per-triangle hot path of the process.
  void decrement(std::uint64_t slot) noexcept {
    --weights_[slot];
    for (auto& level : levels_) {
      slot >>= kShift;
      --level[slot];
    }
  }

  static constexpr unsigned kShift = 6;

 private:
  void update(std::uint64_t slot, std::int64_t delta) noexcept;

  std::vector<std::uint32_t> weights_;
  // levels_[k][j] = sum of level k-1 nodes 64j .. 64j+63 (level 0 = weights_).
  std::vector<std::vector<std::uint64_t>> levels_;
};

/// Sets every edge slot of `s` to the edge's co-degree and every non-edge
/// slot to zero. s.capacity() must equal C(n, 2).
void sync_sampler(const Graph& g, WeightedSampler& s);

struct Triangle {
  Vertex a = 0;
  Vertex b = 0;
  Vertex c = 0;
  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// Sorted triangle from three distinct vertices.
Triangle make_triangle(Vertex x, Vertex y, Vertex z) noexcept;

/// Packs a triangle into one 64-bit key (21 bits per vertex).
constexpr std::uint64_t triangle_key(const Triangle& t) noexcept {
  return (static_cast<std::uint64_t>(t.a) << 42) | (static_cast<std::uint64_t>(t.b) << 21) | t.c;
}

/// Uniform triangle of g: edge uv is drawn with probability Y_uv / 3Q, then w
/// uniformly from N_u ∩ N_v, so every triangle has probability 1/Q.
/// Returns nullopt when g has no triangles. `scratch` is reused storage.
std::optional<Triangle> draw_uniform_triangle(const Graph& g, const WeightedSampler& s,
                                              SplitMix64& rng, std::vector<Vertex>& scratch);
std::optional<Triangle> draw_uniform_triangle(const Graph& g, const WeightedSampler& s,
                                              SplitMix64& rng);

}  // namespace trirem

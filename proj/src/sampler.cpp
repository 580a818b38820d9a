#include "trirem/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trirem/errors.hpp"

namespace trirem {

namespace {
constexpr unsigned kShift = WeightedSampler::kShift;
constexpr std::uint64_t kFan = std::uint64_t{1} << kShift;
}  // namespace

WeightedSampler::WeightedSampler(std::uint64_t capacity) : weights_(capacity, 0) {
  std::uint64_t size = capacity;
  do {
    size = (size + kFan - 1) / kFan;
    levels_.emplace_back(std::max<std::uint64_t>(size, 1), 0);
  } while (size > 1);
}

std::uint32_t WeightedSampler::weight(std::uint64_t slot) const {
  if (slot >= weights_.size()) {
    throw PreconditionError("sampler slot " + std::to_string(slot) + " out of range");
  }
  return weights_[slot];
}

void WeightedSampler::update(std::uint64_t slot, std::int64_t delta) noexcept {
  std::uint64_t idx = slot;
  for (auto& level : levels_) {
    idx >>= kShift;
    level[idx] += static_cast<std::uint64_t>(delta);
  }
}

void WeightedSampler::set_weight(std::uint64_t slot, std::uint32_t w) {
  if (slot >= weights_.size()) {
    throw PreconditionError("sampler slot " + std::to_string(slot) + " out of range");
  }
  const std::int64_t delta = static_cast<std::int64_t>(w) - static_cast<std::int64_t>(weights_[slot]);
  if (delta == 0) return;
  weights_[slot] = w;
  update(slot, delta);
}

std::uint64_t WeightedSampler::sample_index(std::uint64_t r) const {
  if (total() == 0) throw EmptySamplerError("draw from sampler with zero total weight");
  if (r >= total()) throw PreconditionError("sample_index: r must lie in [0, total)");
  std::uint64_t idx = 0;
  for (std::size_t k = levels_.size() - 1; k-- > 0;) {
    const auto& level = levels_[k];
    std::uint64_t child = idx << kShift;
    const std::uint64_t end = std::min<std::uint64_t>(child + kFan, level.size());
    for (; child < end; ++child) {
      if (r < level[child]) break;
      r -= level[child];
    }
    idx = child;
  }
  std::uint64_t slot = idx << kShift;
  const std::uint64_t end = std::min<std::uint64_t>(slot + kFan, weights_.size());
  for (; slot < end; ++slot) {
    if (r < weights_[slot]) return slot;
    r -= weights_[slot];
  }
  throw InvariantError("sampler tree inconsistent with slot weights");
}

std::uint64_t WeightedSampler::sample_index(double r) const {
  if (!(r >= 0.0)) throw PreconditionError("sample_index: r must be non-negative");
  return sample_index(static_cast<std::uint64_t>(std::floor(r)));
}

void sync_sampler(const Graph& g, WeightedSampler& s) {
  const std::uint64_t n = g.n();
  if (s.capacity() != choose2(n)) throw PreconditionError("sampler capacity must be C(n,2)");
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const PairId id = pair_id(n, u, v);
      s.set_weight(id, g.has_edge(u, v) ? g.codegree_at(id) : 0);
    }
  }
}

Triangle make_triangle(Vertex x, Vertex y, Vertex z) noexcept {
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  return {x, y, z};
}

std::optional<Triangle> draw_uniform_triangle(const Graph& g, const WeightedSampler& s,
                                              SplitMix64& rng, std::vector<Vertex>& scratch) {
  if (g.triangle_count() == 0) return std::nullopt;
  const auto slot = s.draw(rng);
  const auto [u, v] = pair_from_id(g.n(), slot);
  scratch.clear();
  g.common_neighbors(u, v, scratch);
  if (scratch.empty()) throw InvariantError("sampled edge has no common neighbours");
  const auto w = scratch[rng.uniform_below(scratch.size())];
  return make_triangle(u, v, w);
}

std::optional<Triangle> draw_uniform_triangle(const Graph& g, const WeightedSampler& s,
                                              SplitMix64& rng) {
  std::vector<Vertex> scratch;
  return draw_uniform_triangle(g, s, rng, scratch);
}

}  // namespace trirem

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "trirem/dyngraph.hpp"
#include "trirem/rng.hpp"
#include "trirem/sampler.hpp"
#include "trirem/trajectory.hpp"

namespace trirem {

enum class Mode { direct, permutation };

struct SnapshotPolicy {
  /// Snapshot whenever p crosses a multiple of dp; first and last are forced.
  /// dp <= 0 disables grid snapshots.
  double dp = 0.01;
  /// Pairs examined per snapshot. 0 means automatic: every pair when
  /// n <= 2048, otherwise 1000 sampled pairs.
  std::uint64_t pair_sample = 0;
  /// Force a full pair scan regardless of n.
  bool full_scan = false;
  StoppingConfig stopping;
};

struct ProcessConfig {
  std::uint64_t seed = 0;
  SnapshotPolicy snapshots;
  /// Switch to the permutation formulation once this many steps are done.
  std::optional<std::uint64_t> permutation_at;
  /// Start survivor-certificate tracking once this many steps are done.
  std::optional<std::uint64_t> certify_at;
  /// Stop (incomplete) as soon as p drops below this value.
  double stop_below_p = 0.0;
  /// Refuse permutation mode when more triangles than this are alive.
  std::uint64_t permutation_guard = 50'000'000;
  /// Run the full O(n^3/64) graph check after every step (tests only).
  bool check_every_step = false;
  /// Keep the sequence of removed triangles in the result.
  bool record_removals = false;
};

struct SurvivorStats {
  std::uint64_t activation_step = 0;
  std::vector<Triangle> x_triangles;  // insertion order
  std::uint64_t y_size = 0;
  std::uint64_t triggered = 0;
  std::uint64_t certified_edges = 0;
  bool disjoint_at_insertion = true;
  std::uint64_t x_size() const noexcept { return x_triangles.size(); }
};

struct RunResult {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t tau0 = 0;        // steps performed
  std::uint64_t final_edges = 0;
  bool completed = false;        // false when stopped early by stop_below_p
  Mode mode = Mode::direct;
  std::optional<std::uint64_t> permutation_at;
  std::vector<Snapshot> snapshots;
  std::optional<SurvivorStats> survivors;
  std::vector<Triangle> removals;
  double wall_seconds = 0;
};

using SnapshotObserver = std::function<void(const Graph&, const Snapshot&)>;

class SurvivorCertifier;

/// The random greedy triangle-removal process. Each step removes the three
/// edges of a uniformly random triangle of the current graph.
class Process {
 public:
  Process(std::uint64_t n, ProcessConfig config);
  /// Start from an arbitrary graph instead of K_n.
  Process(Graph start, ProcessConfig config);
  ~Process();
  Process(Process&&) noexcept;
  Process& operator=(Process&&) noexcept;

  /// Removes one triangle, or returns nullopt if the graph is triangle-free.
  std::optional<Triangle> step();

  /// Steps to termination (or stop_below_p) recording snapshots.
  RunResult run(const SnapshotObserver& observer = {});

  const Graph& graph() const noexcept { return graph_; }
  const WeightedSampler& sampler() const noexcept { return sampler_; }
  std::uint64_t steps() const noexcept { return steps_; }
  Mode mode() const noexcept { return mode_; }
  /// True while the sampler mirrors the graph (direct mode).
  bool sampler_synced() const noexcept { return mode_ == Mode::direct; }
  const SurvivorCertifier* certifier() const noexcept { return certifier_.get(); }

 private:
  void maybe_activate();
  void activate_permutation();
  void remove_triangle(const Triangle& t);
  void check_step_invariants() const;
  Snapshot snapshot() const;

  ProcessConfig config_;
  std::uint64_t initial_edges_ = 0;
  Graph graph_;
  WeightedSampler sampler_;
  SplitMix64 rng_;
  std::uint64_t steps_ = 0;
  Mode mode_ = Mode::direct;
  std::vector<Triangle> queue_;
  std::size_t queue_pos_ = 0;
  std::vector<PairId> snapshot_pairs_;
  std::unique_ptr<SurvivorCertifier> certifier_;
  std::vector<Vertex> scratch_;
  std::vector<Triangle> removals_;
};

/// Tracks the sets 𝒳 (edge-disjoint certificate triangles) and 𝒴 (excluded
/// triangles). After every round, the triangles that for the first time have
/// an edge lying in no other triangle are examined in ascending order; such
/// a triangle outside 𝒴 whose other edges still carry more triangles joins
/// 𝒳, and its second neighbourhood joins 𝒴.
class SurvivorCertifier {
 public:
  SurvivorCertifier(const Graph& g, std::uint64_t activation_step);

  /// Edge (a, b) just had its co-degree lowered during the current round.
  void note_codegree_drop(const Graph& g, Vertex a, Vertex b);
  void end_round(const Graph& g);
  SurvivorStats finish(const Graph& g) const;

  const std::vector<Triangle>& x_triangles() const noexcept { return stats_.x_triangles; }

 private:
  void neighbourhood1(const Graph& g, const Triangle& t, std::vector<Triangle>& out) const;

  SurvivorStats stats_;
  std::vector<std::pair<Vertex, Vertex>> pending_;
  std::unordered_set<std::uint64_t> triggered_;
  std::unordered_set<std::uint64_t> excluded_;
  std::unordered_set<std::uint64_t> x_edges_;
  std::vector<Vertex> scratch_;
};

/// Direct-mode run from K_n.
RunResult run(std::uint64_t n, std::uint64_t seed, const SnapshotPolicy& policy = {});
/// Direct mode for the first i0 steps, then the permutation formulation.
RunResult run_permutation_mode(std::uint64_t n, std::uint64_t seed, std::uint64_t i0,
                               const SnapshotPolicy& policy = {});
/// Direct-mode run with survivor-certificate tracking from step i0.
RunResult survivor_certificates(std::uint64_t n, std::uint64_t seed, std::uint64_t i0,
                                const SnapshotPolicy& policy = {});

const char* mode_name(Mode m) noexcept;

}  // namespace trirem

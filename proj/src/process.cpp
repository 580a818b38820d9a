#include "trirem/process.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "trirem/errors.hpp"

namespace trirem {

namespace {

constexpr std::uint64_t kPairSampleStream = 0x5A17'C0DE'9A1B'0001ULL;
constexpr std::uint64_t kAutoFullScanLimit = 2048;
constexpr std::uint64_t kAutoPairSample = 1000;

std::vector<PairId> choose_snapshot_pairs(std::uint64_t n, std::uint64_t seed,
                                          const SnapshotPolicy& policy) {
  const std::uint64_t total = choose2(n);
  if (policy.full_scan) return {};
  std::uint64_t k = policy.pair_sample;
  if (k == 0) {
    if (n <= kAutoFullScanLimit) return {};
    k = kAutoPairSample;
  }
  if (k >= total) return {};
  SplitMix64 rng(splitmix_mix(seed ^ kPairSampleStream));
  std::unordered_set<PairId> seen;
  std::vector<PairId> out;
  out.reserve(k);
  while (out.size() < k) {
    const PairId id = rng.uniform_below(total);
    if (seen.insert(id).second) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const char* mode_name(Mode m) noexcept { return m == Mode::direct ? "direct" : "permutation"; }

// ---------------------------------------------------------------------------
// SurvivorCertifier

SurvivorCertifier::SurvivorCertifier(const Graph& g, std::uint64_t activation_step) {
  stats_.activation_step = activation_step;
  // Edges already carrying a single triangle trigger at the end of the first
  // round after activation.
  for (const auto& [u, v] : g.edges()) {
    if (g.codegree(u, v) == 1) pending_.emplace_back(u, v);
  }
}

void SurvivorCertifier::note_codegree_drop(const Graph& g, Vertex a, Vertex b) {
  if (g.codegree(a, b) == 1) pending_.emplace_back(a, b);
}

void SurvivorCertifier::neighbourhood1(const Graph& g, const Triangle& t,
                                       std::vector<Triangle>& out) const {
  const std::array<std::array<Vertex, 3>, 3> sides = {
      {{t.a, t.b, t.c}, {t.a, t.c, t.b}, {t.b, t.c, t.a}}};
  std::vector<Vertex> common;
  for (const auto& [x, y, third] : sides) {
    common.clear();
    g.common_neighbors(x, y, common);
    for (auto w : common) {
      if (w != third) out.push_back(make_triangle(x, y, w));
    }
  }
}

void SurvivorCertifier::end_round(const Graph& g) {
  std::vector<Triangle> fresh;
  for (const auto& [a, b] : pending_) {
    if (!g.has_edge(a, b) || g.codegree(a, b) != 1) continue;
    scratch_.clear();
    g.common_neighbors(a, b, scratch_);
    const Triangle t = make_triangle(a, b, scratch_.front());
    if (triggered_.insert(triangle_key(t)).second) fresh.push_back(t);
  }
  pending_.clear();
  std::sort(fresh.begin(), fresh.end());

  std::vector<Triangle> n1;
  std::vector<Triangle> n2;
  for (const auto& t : fresh) {
    ++stats_.triggered;
    if (excluded_.contains(triangle_key(t))) continue;
    const std::uint64_t incident = std::uint64_t{g.codegree(t.a, t.b)} + g.codegree(t.a, t.c) +
                                   g.codegree(t.b, t.c) - 3;
    if (incident == 0) continue;

    const std::array<PairId, 3> edge_ids = {pair_id(g.n(), t.a, t.b), pair_id(g.n(), t.a, t.c),
                                            pair_id(g.n(), t.b, t.c)};
    for (auto id : edge_ids) {
      if (!x_edges_.insert(id).second) stats_.disjoint_at_insertion = false;
    }
    stats_.x_triangles.push_back(t);

    n1.clear();
    neighbourhood1(g, t, n1);
    for (const auto& s : n1) {
      excluded_.insert(triangle_key(s));
      n2.clear();
      neighbourhood1(g, s, n2);
      for (const auto& r : n2) excluded_.insert(triangle_key(r));
    }
  }
  stats_.y_size = excluded_.size();
}

SurvivorStats SurvivorCertifier::finish(const Graph& g) const {
  SurvivorStats out = stats_;
  out.certified_edges = 0;
  for (const auto& t : stats_.x_triangles) {
    out.certified_edges += static_cast<std::uint64_t>(g.has_edge(t.a, t.b)) + g.has_edge(t.a, t.c) +
                           g.has_edge(t.b, t.c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Process

Process::Process(std::uint64_t n, ProcessConfig config)
    : Process(Graph::complete(static_cast<Vertex>(n)), std::move(config)) {}

Process::Process(Graph start, ProcessConfig config)
    : config_(std::move(config)),
      initial_edges_(start.edge_count()),
      graph_(std::move(start)),
      sampler_(choose2(graph_.n())),
      rng_(config_.seed) {
  if (graph_.n() >= (1U << 21)) throw PreconditionError("process supports n < 2^21");
  sync_sampler(graph_, sampler_);
  snapshot_pairs_ = choose_snapshot_pairs(graph_.n(), config_.seed, config_.snapshots);
}

Process::~Process() = default;
Process::Process(Process&&) noexcept = default;
Process& Process::operator=(Process&&) noexcept = default;

void Process::maybe_activate() {
  if (config_.certify_at && !certifier_ && steps_ == *config_.certify_at) {
    certifier_ = std::make_unique<SurvivorCertifier>(graph_, steps_);
  }
  if (config_.permutation_at && mode_ == Mode::direct && steps_ == *config_.permutation_at) {
    activate_permutation();
  }
}

void Process::activate_permutation() {
  const auto q = graph_.triangle_count();
  if (q > config_.permutation_guard) {
    throw ResourceGuardError("permutation mode needs " + std::to_string(q) + " triangles (~" +
                             std::to_string(q * sizeof(Triangle) / (1024 * 1024)) +
                             " MiB); guard is " + std::to_string(config_.permutation_guard));
  }
  queue_.clear();
  queue_.reserve(q);
  std::vector<Vertex> common;
  for (const auto& [u, v] : graph_.edges()) {
    common.clear();
    graph_.common_neighbors(u, v, common);
    for (auto w : common) {
      if (w > v) queue_.push_back({u, v, w});
    }
  }
  shuffle(std::span<Triangle>(queue_), rng_);
  queue_pos_ = 0;
  mode_ = Mode::permutation;
}

void Process::remove_triangle(const Triangle& t) {
  const std::uint64_t n = graph_.n();
  const std::array<std::pair<Vertex, Vertex>, 3> sides = {{{t.a, t.b}, {t.a, t.c}, {t.b, t.c}}};
  for (const auto& [x, y] : sides) {
    graph_.delete_edge(x, y, scratch_);
    if (mode_ == Mode::direct) {
      sampler_.set_weight(pair_id(n, x, y), 0);
      // xw and yw are edges whose co-degree just dropped by one.
      for (auto w : scratch_) {
        sampler_.decrement(pair_id(n, x, w));
        sampler_.decrement(pair_id(n, y, w));
      }
    }
    if (certifier_) {
      for (auto w : scratch_) {
        certifier_->note_codegree_drop(graph_, x, w);
        certifier_->note_codegree_drop(graph_, y, w);
      }
    }
  }
}

void Process::check_step_invariants() const {
  if (graph_.edge_count() + 3 * steps_ != initial_edges_) {
    throw InvariantError("edge count != initial - 3i at step " + std::to_string(steps_));
  }
  if (mode_ == Mode::direct && sampler_.total() != 3 * graph_.triangle_count()) {
    throw InvariantError("sampler total != 3Q at step " + std::to_string(steps_));
  }
  if (config_.check_every_step) graph_.check_invariants();
}

std::optional<Triangle> Process::step() {
  maybe_activate();
  std::optional<Triangle> chosen;
  if (mode_ == Mode::direct) {
    chosen = draw_uniform_triangle(graph_, sampler_, rng_, scratch_);
  } else {
    while (queue_pos_ < queue_.size()) {
      const Triangle& t = queue_[queue_pos_++];
      if (graph_.has_edge(t.a, t.b) && graph_.has_edge(t.a, t.c) && graph_.has_edge(t.b, t.c)) {
        chosen = t;
        break;
      }
    }
    if (!chosen && graph_.triangle_count() != 0) {
      throw InvariantError("permutation exhausted with triangles left");
    }
  }
  if (!chosen) return std::nullopt;
  remove_triangle(*chosen);
  ++steps_;
  if (certifier_) certifier_->end_round(graph_);
  if (config_.record_removals) removals_.push_back(*chosen);
  check_step_invariants();
  return chosen;
}

Snapshot Process::snapshot() const {
  return capture_snapshot(graph_, config_.seed, steps_, snapshot_pairs_, config_.snapshots.stopping);
}

RunResult Process::run(const SnapshotObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.n = graph_.n();
  result.seed = config_.seed;
  result.permutation_at = config_.permutation_at;

  auto take = [&] {
    Snapshot s = snapshot();
    if (observer) observer(graph_, s);
    result.snapshots.push_back(s);
  };
  const double dp = config_.snapshots.dp;
  auto bucket = [&](std::uint64_t i) {
    return dp > 0 ? static_cast<std::int64_t>(std::floor(edge_density(graph_.n(), i) / dp + 1e-9)) : 0;
  };

  take();
  std::int64_t last_bucket = bucket(steps_);
  bool completed = false;
  for (;;) {
    if (config_.stop_below_p > 0 && edge_density(graph_.n(), steps_) < config_.stop_below_p) break;
    if (!step()) {
      completed = true;
      break;
    }
    const auto b = bucket(steps_);
    if (b != last_bucket) {
      last_bucket = b;
      take();
    }
  }
  if (result.snapshots.back().i != steps_) take();

  if (certifier_ == nullptr && config_.certify_at && *config_.certify_at == steps_) {
    certifier_ = std::make_unique<SurvivorCertifier>(graph_, steps_);
  }
  if (completed && graph_.n() <= 200 && graph_.recount_triangles() != 0) {
    throw InvariantError("terminated graph still has triangles");
  }
  result.tau0 = steps_;
  result.final_edges = graph_.edge_count();
  result.completed = completed;
  result.mode = mode_;
  if (certifier_) result.survivors = certifier_->finish(graph_);
  result.removals = removals_;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run(std::uint64_t n, std::uint64_t seed, const SnapshotPolicy& policy) {
  ProcessConfig config;
  config.seed = seed;
  config.snapshots = policy;
  return Process(n, config).run();
}

RunResult run_permutation_mode(std::uint64_t n, std::uint64_t seed, std::uint64_t i0,
                               const SnapshotPolicy& policy) {
  ProcessConfig config;
  config.seed = seed;
  config.snapshots = policy;
  config.permutation_at = i0;
  return Process(n, config).run();
}

RunResult survivor_certificates(std::uint64_t n, std::uint64_t seed, std::uint64_t i0,
                                const SnapshotPolicy& policy) {
  ProcessConfig config;
  config.seed = seed;
  config.snapshots = policy;
  config.certify_at = i0;
  return Process(n, config).run();
}

}  // namespace trirem

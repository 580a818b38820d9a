#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trirem/process.hpp"

namespace trirem {

inline constexpr int kSchemaVersion = 1;

/// Declarative description of an ensemble. Text form is one `key = value`
/// per line, `#` starts a comment:
///
///   n = 128, 256, 512
///   seeds = 1..20          # or: replicates = 20 with master_seed = 7
///   dp = 0.01
///   output = out/
struct ExperimentConfig {
  std::vector<std::uint64_t> ns;
  std::vector<std::uint64_t> seeds;  // explicit list, shared by every n
  std::uint64_t replicates = 0;      // used when seeds is empty
  std::uint64_t master_seed = 0;
  int M = 3;
  double snapshot_dp = 0.01;
  double kappa = 25.0;
  std::optional<double> alpha;
  std::uint64_t pair_sample = 0;  // 0 = automatic
  bool full_scan = false;
  /// Activation points given as edge densities p.
  std::optional<double> permutation_at_p;
  std::optional<double> certify_at_p;
  double stop_below_p = 0.0;
  std::string output_dir;
  unsigned workers = 1;

  /// Per-run seeds for one n: the explicit list, or derive_seed(master, n, r)
  /// for r < replicates.
  std::vector<std::uint64_t> seeds_for(std::uint64_t n) const;
  /// Throws PreconditionError naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Parses the text form. Unknown keys and malformed values throw
/// PreconditionError with the line number.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
/// Applies one `key=value` override (same keys as the file).
void apply_override(ExperimentConfig& config, const std::string& assignment);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares of ln(mean) on ln(n). Needs at least three
/// distinct n and positive values; throws PreconditionError otherwise.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> n_and_mean);

struct SizeStats {
  std::uint64_t n = 0;
  std::uint64_t runs = 0;
  double mean_final_edges = 0;
  double sd_final_edges = 0;
  std::uint64_t min_final_edges = 0;
  std::uint64_t max_final_edges = 0;
  double mean_tau0 = 0;
  double mean_over_n_1_5 = 0;  // mean final edges / n^{3/2}
};

struct Aggregate {
  std::vector<SizeStats> sizes;  // ascending n
  std::optional<ExponentFit> fit;
};

/// Per-run summary as written to JSON (snapshots go to the CSV).
struct RunSummary {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t tau0 = 0;
  std::uint64_t final_edges = 0;
  bool completed = false;
  std::string mode;
  std::optional<std::uint64_t> permutation_at;
  std::uint64_t snapshot_count = 0;
  std::optional<std::uint64_t> certify_at;
  std::optional<std::uint64_t> x_size;
  std::optional<std::uint64_t> y_size;
  std::optional<std::uint64_t> certified_edges;
  std::optional<bool> disjoint_at_insertion;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

RunSummary summarize(const RunResult& r);
Aggregate aggregate(std::span<const RunSummary> runs);

nlohmann::json run_summary_json(const RunSummary& s, const ExperimentConfig* config = nullptr);
RunSummary parse_run_summary(const nlohmann::json& j);
nlohmann::json aggregate_json(const Aggregate& a, const ExperimentConfig* config = nullptr);
Aggregate parse_aggregate(const nlohmann::json& j);

struct ExperimentOutcome {
  std::vector<RunSummary> runs;  // sorted by (n, seed)
  std::vector<Snapshot> snapshots;  // sorted by (n, seed, i)
  Aggregate aggregate;
};

/// Runs every (n, seed) job on `workers` threads. Output content does not
/// depend on scheduling: results are sorted before aggregation and writing.
/// When output_dir is set, writes snapshots.csv, runs/n<N>_seed<S>.json and
/// aggregate.json there; I/O failures throw std::runtime_error with the path.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace trirem

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trirem/dyngraph.hpp"
#include "trirem/rational.hpp"

namespace trirem {

/// Deterministic scales of the process after i steps on n vertices.
/// All logarithms are natural.
struct Scales {
  std::uint64_t n = 0;
  std::uint64_t i = 0;
  double t = 0;                 // i / n^2
  double p = 1;                 // 1 - 6t
  double predicted_edges = 0;   // (n^2 p - n) / 2 == C(n,2) - 3i
  double predicted_Q = 0;       // n^3 p^3 / 6
  double predicted_codegree = 0;  // n p^2
  double zeta = 0;              // n^{-1/2} p^{-1} log n
  double phi = 0;               // p^{-2/log n} log n
  double upsilon = 0;           // (n^3 p^3 + n^2 p)/6 + n^{7/3} p^2
};

/// Throws DomainError when n < 2 or p(i) <= 0.
Scales scales_at(std::uint64_t n, std::uint64_t i);

/// p(i) = 1 - 6i/n^2 without domain checks.
double edge_density(std::uint64_t n, std::uint64_t i) noexcept;

/// Smallest step i with p(i) <= p_target.
std::uint64_t step_at_density(std::uint64_t n, double p_target);

/// E[ΔQ | current graph] = 2 - (1/Q) Σ_{uv∈E} Y_uv². Throws DomainError if Q = 0.
Rational expected_dQ(const Graph& g);

/// E[ΔY_uv | current graph] = -Σ_{x∈N_uv} (Y_ux + Y_vx - 1[uv∈E]) / Q.
/// Throws DomainError if Q = 0, PreconditionError if u == v.
Rational expected_dY(const Graph& g, Vertex u, Vertex v);

/// Bounds (Σa)²/m <= Σa² <= (Σa)²/m + 4mδ² for values within delta of a.
/// Throws PreconditionError naming the first index with |a - a_i| > delta.
std::pair<double, double> sum_sq_bounds(std::span<const double> values, double a, double delta);

/// 2|I| dx dy, the bound on |Σ x_i y_i - (Σx)(Σy)/|I||. Requires equal
/// lengths, |x_i - x| <= dx and |y_i - y| <= dy.
double product_sum_bound(std::span<const double> xs, std::span<const double> ys, double x,
                         double dx, double y, double dy);

/// |Σ x_i y_i - (Σx)(Σy)/|I||.
double product_sum_discrepancy(std::span<const double> xs, std::span<const double> ys);

struct StoppingConfig {
  double kappa = 25.0;
  /// Unset means 3^{3M-1}, the constant implied by the M-ladder co-degree bound.
  std::optional<double> alpha;
  int M = 3;

  double effective_alpha() const;
};

struct StoppingFlags {
  bool tauQ = false;
  bool tauY = false;
  bool tauC = false;
  bool approximate = false;  // Y-based flags computed from a pair sample
};

/// One row of the trajectory record.
struct Snapshot {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t i = 0;
  double p = 1;
  std::uint64_t edges = 0;
  std::uint64_t Q = 0;
  std::uint32_t y_min = 0;
  std::uint32_t y_max = 0;
  double y_mean = 0;
  double y_max_abs_dev = 0;   // max |Y_uv - n p^2|
  double max_y_rel_dev = 0;   // max |Y_uv / (n p^2) - 1|
  double q_rel_dev = 0;       // |Q / (n^3 p^3 / 6) - 1|
  std::uint64_t sampled_pairs = 0;
  bool full_scan = false;
  StoppingFlags flags;
};

/// Reads the live graph. `pairs` empty means scan every pair.
Snapshot capture_snapshot(const Graph& g, std::uint64_t seed, std::uint64_t step,
                          std::span<const PairId> pairs, const StoppingConfig& config);

StoppingFlags stopping_detect(const Snapshot& s, const StoppingConfig& config);

/// Fixed header of the snapshot CSV.
inline constexpr const char* kSnapshotCsvHeader =
    "n,seed,i,p,edges,Q,Q_rel_dev,maxY_rel_dev,sampled_pairs,tauQ,tauY,tauC";

std::string snapshot_csv_row(const Snapshot& s);
/// Parses one data row written by snapshot_csv_row. Fields not carried by
/// the CSV stay at their defaults.
Snapshot parse_snapshot_csv_row(const std::string& line);
std::vector<Snapshot> parse_snapshot_csv(const std::string& text);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace trirem

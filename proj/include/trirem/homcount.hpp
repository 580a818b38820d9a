#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trirem/dyngraph.hpp"
#include "trirem/extgraph.hpp"
#include "trirem/trajectory.hpp"

namespace trirem {

/// Number of injective maps V_H -> V_G that send the i-th root of H (roots in
/// ascending label order) to phi[i] and every H-edge onto a G-edge.
/// Throws PreconditionError if phi has the wrong length, repeats a vertex or
/// leaves [0, n); OverflowError if the count exceeds 64 bits.
std::uint64_t psi(const ExtensionGraph& h, std::span<const Vertex> phi, const Graph& g);

/// Copies of the ladder of w with 0 -> u and 1 -> v. The empty word counts 1.
std::uint64_t psi_ladder(std::string_view w, Vertex u, Vertex v, const Graph& g);

struct XValue {
  std::uint64_t psi = 0;         // copies of the ladder of w
  std::uint64_t psi_prefix = 0;  // copies of the ladder of w minus its last symbol
  double ratio_scale = 0;        // n p^theta, theta = 1 after 'e', else 2
  double x = 0;                  // psi - ratio_scale * psi_prefix
};

/// Deviation of the ladder count from the one-step prediction made by its
/// prefix. Throws PreconditionError for an empty or inadmissible word.
XValue x_components(std::string_view w, Vertex u, Vertex v, const Graph& g, double n, double p);
double x_variable(std::string_view w, Vertex u, Vertex v, const Graph& g, double n, double p);

struct HomAuditConfig {
  int M = 3;
  std::size_t max_word_length = 3;
  std::uint64_t pair_count = 20;
  double p_min = 0.3;
  std::uint64_t seed = 0;
  double snapshot_dp = 0.01;
};

struct AuditEntry {
  std::uint64_t i = 0;
  double p = 1;
  std::string word;
  double max_ratio = 0;  // max over pairs of |X| / (omega zeta S)
  Vertex arg_u = 0;
  Vertex arg_v = 0;
};

struct HomAuditReport {
  std::uint64_t n = 0;
  HomAuditConfig config;
  std::vector<std::string> words;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<AuditEntry> entries;
  double max_ratio = 0;
  std::uint64_t snapshots = 0;

  bool exceeded() const noexcept { return max_ratio > 1.0; }
};

/// Collects, for every snapshot with p >= p_min, the per-word maximum of
/// |X| / (omega zeta S) over a fixed seed-derived set of ordered root pairs.
class ConcentrationAudit {
 public:
  /// Throws ResourceGuardError unless max_word_length <= 4 or n <= 1500.
  ConcentrationAudit(std::uint64_t n, HomAuditConfig config);

  void observe(const Graph& g, const Snapshot& s);
  const HomAuditReport& report() const noexcept { return report_; }

 private:
  HomAuditReport report_;
};

/// Runs the process from K_n (seed from config) down to p_min and audits
/// every snapshot on the way.
HomAuditReport hom_audit(std::uint64_t n, const HomAuditConfig& config);

std::string audit_report_json(const HomAuditReport& r);

}  // namespace trirem

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trirem/dyngraph.hpp"
#include "trirem/rational.hpp"

namespace trirem {

using Edge = std::pair<Vertex, Vertex>;

/// Graph with a distinguished independent set of root vertices. Vertex labels
/// are arbitrary; they are kept sorted, edges are stored as sorted (min, max)
/// pairs.
class ExtensionGraph {
 public:
  ExtensionGraph() = default;
  /// Throws PreconditionError on self-loops, unknown endpoints or roots, or
  /// an edge between two roots. Duplicate entries are merged.
  ExtensionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::vector<Vertex> roots);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& roots() const noexcept { return roots_; }

  std::uint64_t v() const noexcept { return vertices_.size(); }
  std::uint64_t e() const noexcept { return edges_.size(); }
  std::uint64_t iota() const noexcept { return roots_.size(); }

  bool is_root(Vertex x) const;
  bool has_vertex(Vertex x) const;
  bool has_edge(Vertex a, Vertex b) const;

  std::string describe() const;

  friend bool operator==(const ExtensionGraph&, const ExtensionGraph&) = default;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Vertex> roots_;
};

/// n^{n_exp} p^{p_exp}.
struct Scaling {
  std::int64_t n_exp = 0;
  std::int64_t p_exp = 0;

  long double log_value(double n, double p) const;
  double value(double n, double p) const;

  friend Scaling operator*(const Scaling& a, const Scaling& b) noexcept {
    return {a.n_exp + b.n_exp, a.p_exp + b.p_exp};
  }
  friend bool operator==(const Scaling&, const Scaling&) = default;
};

/// n^{v - iota} p^{e}.
Scaling scaling(const ExtensionGraph& h);

/// e / (v - iota). Throws DomainError when v == iota.
Rational density(const ExtensionGraph& h);

/// All induced subextensions: one per vertex set containing the roots,
/// including the edgeless one on the roots alone. Throws ResourceGuardError
/// beyond 24 non-root vertices.
std::vector<ExtensionGraph> subextensions(const ExtensionGraph& h);

/// H/K: H's vertices, the edges of H not in K, with K's vertices as roots.
/// Throws PreconditionError if K is not a subextension of H or leaves an
/// H-edge inside V_K uncovered.
ExtensionGraph quotient(const ExtensionGraph& h, const ExtensionGraph& k);

/// m_H >= m_K (strict: m_H > m_K for every K with fewer edges) over all
/// induced subextensions with v_K > iota.
bool is_balanced(const ExtensionGraph& h, bool strict = false);

struct ThresholdTime {
  std::uint64_t i_star = 0;  // smallest step satisfying the condition
  double p_at_i = 1;         // p(i_star)
  /// Continuous solution in p; n^{-1/m} when r is absent.
  std::optional<double> p_star;
};

/// Smallest integer step i with S_H(n, p(i)) <= 1 (r absent, decided in
/// exact integer arithmetic) or S_H <= zeta^{-r}. Throws PreconditionError
/// if e_H == 0 and DomainError if the condition never holds while p > 0.
ThresholdTime threshold_times(const ExtensionGraph& h, std::uint64_t n,
                              std::optional<double> r = std::nullopt);

}  // namespace trirem

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trirem/extgraph.hpp"

namespace trirem {

// Ladder words are strings over {'e', '0', '1'}. Positions are 1-based
// throughout: symbol(w, 1) is the first character.

/// Symbol at 1-based position k, or '\0' when k is outside [1, |w|].
char symbol(std::string_view w, std::int64_t k) noexcept;

int count_e(std::string_view w) noexcept;

/// True iff w belongs to the admissible word family: no '0' at positions 1
/// and 2, at most two 'e', and none of "e0", "e10", "e1e". Throws
/// PreconditionError on characters outside {e, 0, 1}.
bool validate_word(std::string_view w);

/// The triangular ladder grown from a word: vertices 0 .. |w|+1, vertex k+1
/// attached to k and (for '1') to k-1 or (for '0') to the other neighbour
/// of k.
struct Ladder {
  std::string word;
  Vertex vertex_count = 0;
  std::vector<Edge> edges;  // sorted (min, max)

  bool has_edge(Vertex a, Vertex b) const;
  std::vector<Vertex> neighbors(Vertex x) const;
};

/// Throws PreconditionError for an empty or inadmissible word.
Ladder build_ladder(std::string_view w);

/// Shared, immutable ladder for a word; safe to call from several threads.
const Ladder& cached_ladder(const std::string& w);

struct Fan {
  Vertex a = 0;
  int f = 0;
  bool after_e = false;  // the variant where symbol a-2 is 'e'
  friend bool operator==(const Fan&, const Fan&) = default;
};

/// Largest fan size at vertex a read off the word pattern (0 if none).
/// For a-2 < 1 the ordinary form applies.
int fan_size_at(std::string_view w, Vertex a);

/// Largest f >= 3 fan (smallest anchor on ties) from the word pattern.
std::optional<Fan> max_fan(std::string_view w);

/// Same, computed from the adjacency of the built ladder.
std::optional<Fan> max_fan_by_adjacency(const Ladder& l);

/// True iff the word has a fan of size >= m at some vertex.
bool has_fan(std::string_view w, int m);

/// Membership in the M-bounded family. The empty word is not a member.
bool in_bounded_family(std::string_view w, int M);

/// Longest member length for a given number of 'e' symbols: 3M-1, 2M, M+1.
int max_length_for(int e_count, int M);

/// All members of the M-bounded family, ordered by length and then
/// lexicographically. Throws PreconditionError for M < 3.
std::vector<std::string> enumerate_bounded_family(int M);

enum class EdgeClass { outer_boundary, side_boundary, initial, interior };

const char* edge_class_name(EdgeClass c) noexcept;

struct EdgeInfo {
  EdgeClass cls = EdgeClass::interior;
  /// Edge at vertex 0; no boundary test applies and it is reported as
  /// initial.
  bool root_edge = false;
};

/// Classifies ladder edge yz (order of y, z irrelevant) of a member of the
/// M-bounded family. Throws PreconditionError if w is not a member or yz is
/// not an edge.
EdgeInfo classify_edge(std::string_view w, Vertex y, Vertex z, int M);

/// Exponent 3M - |w| - (M-1) #e of the envelope weight.
int omega_exponent(std::string_view w, int M);

/// 3^{omega_exponent}; throws PreconditionError if w is not a member.
std::uint64_t omega(std::string_view w, int M);

/// The ladder as an extension graph rooted at {0, 1}.
ExtensionGraph ladder_extension(std::string_view w);

/// Ladder minus the edges inside {0, 1, y, z}, rooted there. yz must be an
/// outer boundary edge.
ExtensionGraph backward_extension(std::string_view w, Vertex y, Vertex z, int M);

/// Ladder minus the edges inside the root set chosen by the class of yz:
/// initial {0..y, z}; side boundary {0..y, z} or {0..y-2, y, z} when symbol
/// y-2 is 'e'; interior {0..z}. Vertices 0 and 1 are always roots. yz must
/// not be an outer boundary edge.
ExtensionGraph forward_extension(std::string_view w, Vertex y, Vertex z, int M);

}  // namespace trirem

#include "trirem/ladders.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "trirem/errors.hpp"

namespace trirem {

namespace {

void check_chars(std::string_view w) {
  for (char c : w) {
    if (c != 'e' && c != '0' && c != '1') {
      throw PreconditionError(std::string("ladder word: invalid character '") + c + "'");
    }
  }
}

void require_member(std::string_view w, int M) {
  if (!in_bounded_family(w, M)) {
    throw PreconditionError("word '" + std::string(w) + "' is not in the " + std::to_string(M) +
                            "-bounded family");
  }
}

std::vector<Vertex> range_vertices(Vertex lo, Vertex hi) {
  std::vector<Vertex> out;
  for (Vertex x = lo; x <= hi; ++x) out.push_back(x);
  return out;
}

ExtensionGraph strip_inside(const Ladder& l, std::vector<Vertex> roots) {
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  auto is_root = [&](Vertex x) { return std::binary_search(roots.begin(), roots.end(), x); };
  std::vector<Edge> kept;
  for (const auto& [a, b] : l.edges) {
    if (!(is_root(a) && is_root(b))) kept.emplace_back(a, b);
  }
  return {range_vertices(0, l.vertex_count - 1), std::move(kept), std::move(roots)};
}

}  // namespace

char symbol(std::string_view w, std::int64_t k) noexcept {
  if (k < 1 || k > static_cast<std::int64_t>(w.size())) return '\0';
  return w[static_cast<std::size_t>(k - 1)];
}

int count_e(std::string_view w) noexcept {
  return static_cast<int>(std::count(w.begin(), w.end(), 'e'));
}

bool validate_word(std::string_view w) {
  check_chars(w);
  if (symbol(w, 1) == '0' || symbol(w, 2) == '0') return false;
  if (count_e(w) > 2) return false;
  for (std::string_view bad : {"e0", "e10", "e1e"}) {
    if (w.find(bad) != std::string_view::npos) return false;
  }
  return true;
}

bool Ladder::has_edge(Vertex a, Vertex b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges.begin(), edges.end(), Edge{a, b});
}

std::vector<Vertex> Ladder::neighbors(Vertex x) const {
  std::vector<Vertex> out;
  for (const auto& [a, b] : edges) {
    if (a == x) out.push_back(b);
    if (b == x) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Ladder build_ladder(std::string_view w) {
  if (w.empty()) throw PreconditionError("ladder word must be non-empty");
  if (!validate_word(w)) throw PreconditionError("word '" + std::string(w) + "' is not admissible");
  Ladder l;
  l.word = std::string(w);
  const auto k_max = static_cast<Vertex>(w.size());
  l.vertex_count = k_max + 2;
  // Neighbours of each vertex among earlier vertices.
  std::vector<std::vector<Vertex>> back(l.vertex_count);
  auto add = [&](Vertex a, Vertex b) {
    back[b].push_back(a);
    l.edges.emplace_back(std::min(a, b), std::max(a, b));
  };
  add(1, 2);
  if (w[0] == '1') add(0, 2);
  for (Vertex k = 2; k <= k_max; ++k) {
    add(k, k + 1);
    const char c = symbol(w, k);
    if (c == '1') {
      add(k - 1, k + 1);
    } else if (c == '0') {
      // k is still the last vertex, so its neighbours are k-1 and one more.
      Vertex other = 0;
      bool found = false;
      for (auto x : back[k]) {
        if (x != k - 1) {
          other = x;
          found = true;
        }
      }
      if (!found) throw InvariantError("ladder: vertex " + std::to_string(k) + " lacks a second neighbour");
      add(other, k + 1);
    }
  }
  std::sort(l.edges.begin(), l.edges.end());
  return l;
}

const Ladder& cached_ladder(const std::string& w) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Ladder>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[w];
  if (!slot) slot = std::make_unique<Ladder>(build_ladder(w));
  return *slot;
}

int fan_size_at(std::string_view w, Vertex a) {
  const auto ai = static_cast<std::int64_t>(a);
  if (a == 0 || symbol(w, ai + 1) != '1') return 0;
  int zeros = 0;
  while (symbol(w, ai + 2 + zeros) == '0') ++zeros;
  const bool after_e = symbol(w, ai - 2) == 'e';
  return after_e ? 2 + zeros : 1 + zeros;
}

std::optional<Fan> max_fan(std::string_view w) {
  std::optional<Fan> best;
  for (Vertex a = 1; a <= w.size(); ++a) {
    const int f = fan_size_at(w, a);
    if (f >= 3 && (!best || f > best->f)) {
      best = Fan{a, f, symbol(w, static_cast<std::int64_t>(a) - 2) == 'e'};
    }
  }
  return best;
}

std::optional<Fan> max_fan_by_adjacency(const Ladder& l) {
  std::optional<Fan> best;
  for (Vertex a = 1; a < l.vertex_count; ++a) {
    Vertex end = a;  // last vertex of the run a+1, a+2, ... adjacent to a
    while (end + 1 < l.vertex_count && l.has_edge(a, end + 1)) ++end;
    if (end == a) continue;
    const bool after_e = symbol(l.word, static_cast<std::int64_t>(a) - 2) == 'e';
    int f = 0;
    if (after_e) {
      f = l.has_edge(a - 1, a) ? static_cast<int>(end - a) : 0;
    } else {
      f = static_cast<int>(end - a) - 1;
    }
    if (f >= 3 && (!best || f > best->f)) best = Fan{a, f, after_e};
  }
  return best;
}

bool has_fan(std::string_view w, int m) {
  const auto fan = max_fan(w);
  return fan && fan->f >= m;
}

int max_length_for(int e_count, int M) {
  switch (e_count) {
    case 0: return 3 * M - 1;
    case 1: return 2 * M;
    case 2: return M + 1;
    default: return -1;
  }
}

bool in_bounded_family(std::string_view w, int M) {
  if (M < 3) throw PreconditionError("the bounded family needs M >= 3");
  if (w.empty() || !validate_word(w)) return false;
  const int e = count_e(w);
  const auto len = static_cast<int>(w.size());
  if (len > max_length_for(e, M)) return false;
  if (e == 1 && symbol(w, 2 * M) == 'e') return false;
  if (e == 2 && symbol(w, M + 1) == 'e') return false;
  return !has_fan(w, M);
}

std::vector<std::string> enumerate_bounded_family(int M) {
  if (M < 3) throw PreconditionError("the bounded family needs M >= 3");
  // The family is prefix-closed, so extending members only finds them all.
  std::vector<std::string> out;
  std::vector<std::string> frontier = {""};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      for (char c : {'0', '1', 'e'}) {
        std::string x = w + c;
        if (in_bounded_family(x, M)) next.push_back(std::move(x));
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

const char* edge_class_name(EdgeClass c) noexcept {
  switch (c) {
    case EdgeClass::outer_boundary: return "outer_boundary";
    case EdgeClass::side_boundary: return "side_boundary";
    case EdgeClass::initial: return "initial";
    case EdgeClass::interior: return "interior";
  }
  return "?";
}

EdgeInfo classify_edge(std::string_view w, Vertex y, Vertex z, int M) {
  require_member(w, M);
  if (y > z) std::swap(y, z);
  const Ladder& l = cached_ladder(std::string(w));
  if (!l.has_edge(y, z)) {
    throw PreconditionError("(" + std::to_string(y) + "," + std::to_string(z) + ") is not an edge of L_" +
                            std::string(w));
  }
  EdgeInfo info;
  if (y == 0) {
    info.cls = EdgeClass::initial;
    info.root_edge = true;
    return info;
  }
  const char sy = symbol(w, y);
  if (sy != 'e') {
    std::string extended(w.substr(0, z - 1));
    extended += (y < z - 1) ? '0' : '1';
    if (!in_bounded_family(extended, M)) {
      const bool last = z == w.size() + 1;
      const bool maximal = static_cast<int>(w.size()) == max_length_for(count_e(w), M);
      info.cls = (last && maximal) ? EdgeClass::outer_boundary : EdgeClass::side_boundary;
      return info;
    }
  }
  info.cls = sy == 'e' ? EdgeClass::initial : EdgeClass::interior;
  return info;
}

int omega_exponent(std::string_view w, int M) {
  return 3 * M - static_cast<int>(w.size()) - (M - 1) * count_e(w);
}

std::uint64_t omega(std::string_view w, int M) {
  require_member(w, M);
  const int k = omega_exponent(w, M);
  std::uint64_t out = 1;
  for (int j = 0; j < k; ++j) out *= 3;
  return out;
}

ExtensionGraph ladder_extension(std::string_view w) {
  const Ladder& l = cached_ladder(std::string(w));
  return strip_inside(l, {0, 1});
}

ExtensionGraph backward_extension(std::string_view w, Vertex y, Vertex z, int M) {
  if (classify_edge(w, y, z, M).cls != EdgeClass::outer_boundary) {
    throw PreconditionError("backward extension needs an outer boundary edge");
  }
  return strip_inside(cached_ladder(std::string(w)), {0, 1, y, z});
}

ExtensionGraph forward_extension(std::string_view w, Vertex y, Vertex z, int M) {
  if (y > z) std::swap(y, z);
  const EdgeInfo info = classify_edge(w, y, z, M);
  std::vector<Vertex> roots = {0, 1};
  switch (info.cls) {
    case EdgeClass::outer_boundary:
      throw PreconditionError("forward extension is undefined for an outer boundary edge");
    case EdgeClass::initial:
      for (Vertex x = 0; x <= y; ++x) roots.push_back(x);
      roots.push_back(z);
      break;
    case EdgeClass::side_boundary:
      if (symbol(w, static_cast<std::int64_t>(y) - 2) == 'e') {
        for (Vertex x = 0; x + 2 <= y; ++x) roots.push_back(x);
        roots.push_back(y);
      } else {
        for (Vertex x = 0; x <= y; ++x) roots.push_back(x);
      }
      roots.push_back(z);
      break;
    case EdgeClass::interior:
      for (Vertex x = 0; x <= z; ++x) roots.push_back(x);
      break;
  }
  return strip_inside(cached_ladder(std::string(w)), std::move(roots));
}

}  // namespace trirem

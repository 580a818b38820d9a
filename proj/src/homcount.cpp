#include "trirem/homcount.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "json.hpp"

#include "trirem/errors.hpp"
#include "trirem/ladders.hpp"
#include "trirem/process.hpp"
#include "trirem/rng.hpp"

namespace trirem {

namespace {

constexpr std::uint64_t kAuditPairStream = 0xA0D1'7E55'0000'0002ULL;

/// Backtracking counter over the non-root vertices of H in a fixed order.
class PsiCounter {
 public:
  PsiCounter(const ExtensionGraph& h, std::span<const Vertex> phi, const Graph& g) : g_(g) {
    const auto& vs = h.vertices();
    if (phi.size() != h.iota()) {
      throw PreconditionError("psi: root map has " + std::to_string(phi.size()) + " entries, H has " +
                              std::to_string(h.iota()) + " roots");
    }
    for (std::size_t k = 0; k < phi.size(); ++k) {
      if (phi[k] >= g.n()) throw PreconditionError("psi: root image " + std::to_string(phi[k]) + " out of range");
      for (std::size_t j = 0; j < k; ++j) {
        if (phi[j] == phi[k]) throw PreconditionError("psi: root map is not injective");
      }
    }
    auto local = [&](Vertex x) {
      return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
    };
    std::vector<std::vector<std::size_t>> adj(vs.size());
    for (const auto& [a, b] : h.edges()) {
      adj[local(a)].push_back(local(b));
      adj[local(b)].push_back(local(a));
    }

    // slot[x] = position of vertex x in the assignment order.
    std::vector<std::size_t> slot(vs.size(), SIZE_MAX);
    for (std::size_t k = 0; k < h.roots().size(); ++k) {
      slot[local(h.roots()[k])] = k;
      images_.push_back(phi[k]);
    }
    std::size_t placed = h.roots().size();
    // Most constrained first: most already-placed neighbours, then label.
    while (placed < vs.size()) {
      std::size_t best = SIZE_MAX;
      std::size_t best_links = 0;
      for (std::size_t x = 0; x < vs.size(); ++x) {
        if (slot[x] != SIZE_MAX) continue;
        std::size_t links = 0;
        for (auto y : adj[x]) links += slot[y] != SIZE_MAX;
        if (best == SIZE_MAX || links > best_links) {
          best = x;
          best_links = links;
        }
      }
      slot[best] = placed++;
      std::vector<std::size_t> cons;
      for (auto y : adj[best]) {
        if (slot[y] < slot[best]) cons.push_back(slot[y]);
      }
      constraints_.push_back(std::move(cons));
    }
    images_.resize(vs.size());
    roots_ = h.roots().size();
    words_ = g.words_per_row();
    full_.assign(words_, ~std::uint64_t{0});
    if (g.n() % 64 != 0 && words_ > 0) full_.back() = (std::uint64_t{1} << (g.n() % 64)) - 1;
    buffers_.assign(constraints_.size(), std::vector<std::uint64_t>(words_));
  }

  std::uint64_t count() {
    if (constraints_.empty()) return 1;
    return descend(0);
  }

 private:
  std::uint64_t descend(std::size_t depth) {
    auto& cand = buffers_[depth];
    const auto& cons = constraints_[depth];
    if (cons.empty()) {
      cand = full_;
    } else {
      const auto first = g_.row(images_[cons[0]]);
      std::copy(first.begin(), first.end(), cand.begin());
      for (std::size_t k = 1; k < cons.size(); ++k) {
        const auto r = g_.row(images_[cons[k]]);
        for (std::size_t w = 0; w < words_; ++w) cand[w] &= r[w];
      }
    }
    const std::size_t assigned = roots_ + depth;
    for (std::size_t k = 0; k < assigned; ++k) {
      cand[images_[k] / 64] &= ~(std::uint64_t{1} << (images_[k] % 64));
    }
    std::uint64_t total = 0;
    if (depth + 1 == constraints_.size()) {
      for (auto w : cand) total += static_cast<std::uint64_t>(std::popcount(w));
      return total;
    }
    for_each_bit(std::span<const std::uint64_t>(cand), [&](Vertex x) {
      images_[assigned] = x;
      const std::uint64_t sub = descend(depth + 1);
      if (__builtin_add_overflow(total, sub, &total)) throw OverflowError("psi: count exceeds 64 bits");
    });
    return total;
  }

  const Graph& g_;
  std::vector<Vertex> images_;                     // by assignment position
  std::vector<std::vector<std::size_t>> constraints_;  // per non-root depth
  std::vector<std::vector<std::uint64_t>> buffers_;
  std::vector<std::uint64_t> full_;
  std::size_t roots_ = 0;
  std::size_t words_ = 0;
};

std::uint64_t pow3(int k) {
  std::uint64_t out = 1;
  for (int j = 0; j < k; ++j) out *= 3;
  return out;
}

}  // namespace

std::uint64_t psi(const ExtensionGraph& h, std::span<const Vertex> phi, const Graph& g) {
  return PsiCounter(h, phi, g).count();
}

std::uint64_t psi_ladder(std::string_view w, Vertex u, Vertex v, const Graph& g) {
  if (u == v) throw PreconditionError("psi_ladder: roots must be distinct");
  if (w.empty()) return 1;
  const std::array<Vertex, 2> phi = {u, v};
  return psi(ladder_extension(w), phi, g);
}

XValue x_components(std::string_view w, Vertex u, Vertex v, const Graph& g, double n, double p) {
  if (w.empty() || !validate_word(w)) {
    throw PreconditionError("x_variable: '" + std::string(w) + "' is not an admissible non-empty word");
  }
  XValue out;
  out.psi = psi_ladder(w, u, v, g);
  out.psi_prefix = psi_ladder(w.substr(0, w.size() - 1), u, v, g);
  const double theta = w.back() == 'e' ? 1.0 : 2.0;
  out.ratio_scale = n * std::pow(p, theta);
  out.x = static_cast<double>(out.psi) - out.ratio_scale * static_cast<double>(out.psi_prefix);
  return out;
}

double x_variable(std::string_view w, Vertex u, Vertex v, const Graph& g, double n, double p) {
  return x_components(w, u, v, g, n, p).x;
}

ConcentrationAudit::ConcentrationAudit(std::uint64_t n, HomAuditConfig config) {
  report_.n = n;
  report_.config = config;
  if (n < 2) throw PreconditionError("hom audit needs n >= 2");
  if (config.max_word_length == 0) throw PreconditionError("hom audit needs max_word_length >= 1");
  if (config.max_word_length > 4 && n > 1500) {
    const double cost = static_cast<double>(config.pair_count) *
                        std::pow(static_cast<double>(n), static_cast<double>(config.max_word_length) - 1);
    throw ResourceGuardError("hom audit with words of length " + std::to_string(config.max_word_length) +
                             " at n = " + std::to_string(n) + " needs ~" + format_double(cost) +
                             " candidate checks per snapshot; use length <= 4 or n <= 1500");
  }
  for (auto& w : enumerate_bounded_family(config.M)) {
    if (w.size() <= config.max_word_length) report_.words.push_back(w);
  }
  SplitMix64 rng(splitmix_mix(config.seed ^ kAuditPairStream));
  const std::uint64_t ordered = n * (n - 1);
  const std::uint64_t want = std::min(config.pair_count, ordered);
  std::unordered_set<std::uint64_t> seen;
  while (report_.pairs.size() < want) {
    const auto u = static_cast<Vertex>(rng.uniform_below(n));
    const auto v = static_cast<Vertex>(rng.uniform_below(n));
    if (u == v || !seen.insert(std::uint64_t{u} * n + v).second) continue;
    report_.pairs.emplace_back(u, v);
  }
}

void ConcentrationAudit::observe(const Graph& g, const Snapshot& s) {
  if (s.p < report_.config.p_min || s.p <= 0) return;
  ++report_.snapshots;
  const auto sc = scales_at(g.n(), s.i);
  const double n = static_cast<double>(g.n());
  for (const auto& w : report_.words) {
    const auto k = static_cast<double>(w.size());
    const double s_pi = std::pow(n, k) * std::pow(sc.p, 2 * k - count_e(w));
    const double envelope = static_cast<double>(pow3(omega_exponent(w, report_.config.M))) * sc.zeta * s_pi;
    AuditEntry entry;
    entry.i = s.i;
    entry.p = sc.p;
    entry.word = w;
    entry.max_ratio = -1;
    for (const auto& [u, v] : report_.pairs) {
      const double ratio = std::abs(x_variable(w, u, v, g, n, sc.p)) / envelope;
      if (ratio > entry.max_ratio) {
        entry.max_ratio = ratio;
        entry.arg_u = u;
        entry.arg_v = v;
      }
    }
    report_.max_ratio = std::max(report_.max_ratio, entry.max_ratio);
    report_.entries.push_back(std::move(entry));
  }
}

HomAuditReport hom_audit(std::uint64_t n, const HomAuditConfig& config) {
  ConcentrationAudit audit(n, config);
  ProcessConfig pc;
  pc.seed = config.seed;
  pc.snapshots.dp = config.snapshot_dp;
  pc.stop_below_p = config.p_min;
  Process proc(n, pc);
  proc.run([&](const Graph& g, const Snapshot& s) { audit.observe(g, s); });
  return audit.report();
}

std::string audit_report_json(const HomAuditReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = r.n;
  j["seed"] = r.config.seed;
  j["M"] = r.config.M;
  j["p_min"] = r.config.p_min;
  j["max_word_length"] = r.config.max_word_length;
  j["pair_count"] = r.pairs.size();
  j["snapshots"] = r.snapshots;
  j["words"] = r.words;
  j["max_ratio"] = r.max_ratio;
  j["exceeded"] = r.exceeded();
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"i", e.i},
                       {"p", e.p},
                       {"word", e.word},
                       {"max_ratio", e.max_ratio},
                       {"argmax_pair", {e.arg_u, e.arg_v}}});
  }
  return j.dump(2);
}

}  // namespace trirem

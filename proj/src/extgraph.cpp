#include "trirem/extgraph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "trirem/errors.hpp"

namespace trirem {

namespace {

template <class T>
void sort_unique(std::vector<T>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

bool contains(const std::vector<Vertex>& sorted, Vertex x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

constexpr std::size_t kMaxSubsetBits = 24;

}  // namespace

ExtensionGraph::ExtensionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
                               std::vector<Vertex> roots)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), roots_(std::move(roots)) {
  sort_unique(vertices_);
  for (auto& [a, b] : edges_) {
    if (a == b) throw PreconditionError("extension graph: self-loop at " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!contains(vertices_, a) || !contains(vertices_, b)) {
      throw PreconditionError("extension graph: edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") has an unknown endpoint");
    }
  }
  sort_unique(edges_);
  sort_unique(roots_);
  for (auto r : roots_) {
    if (!contains(vertices_, r)) throw PreconditionError("extension graph: unknown root " + std::to_string(r));
  }
  for (const auto& [a, b] : edges_) {
    if (contains(roots_, a) && contains(roots_, b)) {
      throw PreconditionError("extension graph: roots " + std::to_string(a) + " and " +
                              std::to_string(b) + " are adjacent");
    }
  }
}

bool ExtensionGraph::is_root(Vertex x) const { return contains(roots_, x); }
bool ExtensionGraph::has_vertex(Vertex x) const { return contains(vertices_, x); }

bool ExtensionGraph::has_edge(Vertex a, Vertex b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::string ExtensionGraph::describe() const {
  std::ostringstream os;
  os << "V={";
  for (std::size_t k = 0; k < vertices_.size(); ++k) os << (k ? "," : "") << vertices_[k];
  os << "} I={";
  for (std::size_t k = 0; k < roots_.size(); ++k) os << (k ? "," : "") << roots_[k];
  os << "} E={";
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    os << (k ? " " : "") << edges_[k].first << '-' << edges_[k].second;
  }
  os << '}';
  return os.str();
}

long double Scaling::log_value(double n, double p) const {
  return static_cast<long double>(n_exp) * std::log(static_cast<long double>(n)) +
         static_cast<long double>(p_exp) * std::log(static_cast<long double>(p));
}

double Scaling::value(double n, double p) const {
  return static_cast<double>(std::exp(log_value(n, p)));
}

Scaling scaling(const ExtensionGraph& h) {
  return {static_cast<std::int64_t>(h.v() - h.iota()), static_cast<std::int64_t>(h.e())};
}

Rational density(const ExtensionGraph& h) {
  if (h.v() == h.iota()) throw DomainError("density undefined when every vertex is a root");
  return Rational(static_cast<Rational::Int>(h.e()), static_cast<Rational::Int>(h.v() - h.iota()));
}

std::vector<ExtensionGraph> subextensions(const ExtensionGraph& h) {
  std::vector<Vertex> free;
  for (auto x : h.vertices()) {
    if (!h.is_root(x)) free.push_back(x);
  }
  if (free.size() > kMaxSubsetBits) {
    throw ResourceGuardError("subextensions: " + std::to_string(free.size()) +
                             " non-root vertices give 2^" + std::to_string(free.size()) + " subsets");
  }
  std::vector<ExtensionGraph> out;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<Vertex> vs = h.roots();
    for (std::size_t k = 0; k < free.size(); ++k) {
      if ((mask >> k) & 1U) vs.push_back(free[k]);
    }
    std::sort(vs.begin(), vs.end());
    std::vector<Edge> es;
    for (const auto& [a, b] : h.edges()) {
      if (contains(vs, a) && contains(vs, b)) es.emplace_back(a, b);
    }
    out.emplace_back(std::move(vs), std::move(es), h.roots());
  }
  return out;
}

ExtensionGraph quotient(const ExtensionGraph& h, const ExtensionGraph& k) {
  if (k.roots() != h.roots()) throw PreconditionError("quotient: K must share H's roots");
  for (auto x : k.vertices()) {
    if (!h.has_vertex(x)) throw PreconditionError("quotient: vertex " + std::to_string(x) + " of K not in H");
  }
  for (const auto& [a, b] : k.edges()) {
    if (!h.has_edge(a, b)) throw PreconditionError("quotient: K has an edge not in H");
  }
  std::vector<Edge> rest;
  for (const auto& [a, b] : h.edges()) {
    if (k.has_edge(a, b)) continue;
    if (k.has_vertex(a) && k.has_vertex(b)) {
      throw PreconditionError("quotient: H-edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") lies inside V_K but not in K");
    }
    rest.emplace_back(a, b);
  }
  return {h.vertices(), std::move(rest), k.vertices()};
}

bool is_balanced(const ExtensionGraph& h, bool strict) {
  const Rational m_h = density(h);
  for (const auto& k : subextensions(h)) {
    if (k.v() == k.iota()) continue;
    const Rational m_k = density(k);
    if (m_k > m_h) return false;
    if (strict && k.e() < h.e() && m_k == m_h) return false;
  }
  return true;
}

ThresholdTime threshold_times(const ExtensionGraph& h, std::uint64_t n, std::optional<double> r) {
  using boost::multiprecision::cpp_int;
  if (h.e() == 0) throw PreconditionError("threshold_times needs at least one edge");
  if (n < 2) throw DomainError("threshold_times needs n >= 2");
  const auto a = static_cast<std::int64_t>(h.v() - h.iota());
  const auto b = static_cast<std::int64_t>(h.e());
  const std::uint64_t nn = n * n;
  const std::uint64_t i_max = (nn - 1) / 6;  // last step with p > 0

  const bool exact = !r || *r == 0.0;
  const double rr = r.value_or(0.0);
  const long double logn = std::log(static_cast<long double>(n));
  const long double loglogn = std::log(logn);

  const cpp_int n_pow_a = boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(a));
  const cpp_int n_pow_2b = boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(2 * b));
  // S = n^a ((n^2 - 6i)/n^2)^b <= 1  <=>  n^a (n^2 - 6i)^b <= n^{2b}.
  auto holds = [&](std::uint64_t i) {
    if (exact) {
      const cpp_int lhs = n_pow_a * boost::multiprecision::pow(cpp_int(nn - 6 * i), static_cast<unsigned>(b));
      return lhs <= n_pow_2b;
    }
    // log S - log zeta^{-r} = (a - r/2) log n + (b - r) log p + r log log n.
    const long double p = (static_cast<long double>(nn) - 6.0L * i) / static_cast<long double>(nn);
    const long double g = (a - rr / 2) * logn + (b - rr) * std::log(p) + rr * loglogn;
    return g <= 0;
  };

  ThresholdTime out;
  if (exact) {
    out.p_star = std::pow(static_cast<double>(n), -static_cast<double>(a) / static_cast<double>(b));
  } else if (static_cast<double>(b) != rr) {
    const long double lp = -((a - rr / 2) * logn + rr * loglogn) / (b - rr);
    out.p_star = static_cast<double>(std::exp(lp));
  }

  if (holds(0)) {
    out.i_star = 0;
  } else {
    // The condition is monotone in i only when the p exponent is positive.
    if (static_cast<double>(b) <= rr || !holds(i_max)) {
      throw DomainError("threshold not reached while p > 0 (n = " + std::to_string(n) + ")");
    }
    std::uint64_t lo = 0;  // fails
    std::uint64_t hi = i_max;  // holds
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (holds(mid) ? hi : lo) = mid;
    }
    out.i_star = hi;
  }
  out.p_at_i = static_cast<double>((static_cast<long double>(nn) - 6.0L * out.i_star) / static_cast<long double>(nn));
  return out;
}

}  // namespace trirem

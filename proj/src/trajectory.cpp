#include "trirem/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "trirem/errors.hpp"

namespace trirem {

double edge_density(std::uint64_t n, std::uint64_t i) noexcept {
  if (n == 0) return 1.0;
  const long double nn = static_cast<long double>(n) * static_cast<long double>(n);
  return static_cast<double>((nn - 6.0L * static_cast<long double>(i)) / nn);
}

Scales scales_at(std::uint64_t n, std::uint64_t i) {
  if (n < 2) throw DomainError("scales need n >= 2");
  const long double nn = static_cast<long double>(n) * static_cast<long double>(n);
  if (6.0L * static_cast<long double>(i) >= nn) {
    throw DomainError("p(i) <= 0 for i = " + std::to_string(i) + ", n = " + std::to_string(n));
  }
  Scales s;
  s.n = n;
  s.i = i;
  const double nd = static_cast<double>(n);
  const double logn = std::log(nd);
  s.t = static_cast<double>(static_cast<long double>(i) / nn);
  s.p = edge_density(n, i);
  // n^2 p - n = n^2 - 6i - n, exact in integers.
  s.predicted_edges = static_cast<double>(choose2(n)) - 3.0 * static_cast<double>(i);
  s.predicted_Q = nd * nd * nd * s.p * s.p * s.p / 6.0;
  s.predicted_codegree = nd * s.p * s.p;
  s.zeta = logn / (std::sqrt(nd) * s.p);
  s.phi = std::pow(s.p, -2.0 / logn) * logn;
  s.upsilon = (nd * nd * nd * s.p * s.p * s.p + nd * nd * s.p) / 6.0 + std::pow(nd, 7.0 / 3.0) * s.p * s.p;
  return s;
}

std::uint64_t step_at_density(std::uint64_t n, double p_target) {
  if (n == 0 || p_target >= 1.0) return 0;
  const long double nn = static_cast<long double>(n) * static_cast<long double>(n);
  auto i = static_cast<std::uint64_t>(std::max(0.0L, std::floor((1.0L - p_target) * nn / 6.0L)));
  while (i > 0 && edge_density(n, i - 1) <= p_target) --i;
  while (edge_density(n, i) > p_target) ++i;
  return i;
}

Rational expected_dQ(const Graph& g) {
  const auto q = g.triangle_count();
  if (q == 0) throw DomainError("expected_dQ undefined when Q = 0");
  __int128 sum_sq = 0;
  for (const auto& [u, v] : g.edges()) {
    const __int128 y = g.codegree(u, v);
    sum_sq += y * y;
  }
  return Rational(2) - Rational(sum_sq, static_cast<__int128>(q));
}

Rational expected_dY(const Graph& g, Vertex u, Vertex v) {
  if (u == v) throw PreconditionError("expected_dY needs two distinct vertices");
  const auto q = g.triangle_count();
  if (q == 0) throw DomainError("expected_dY undefined when Q = 0");
  const __int128 adjacent = g.has_edge(u, v) ? 1 : 0;
  std::vector<Vertex> common;
  g.common_neighbors(u, v, common);
  __int128 sum = 0;
  for (auto x : common) sum += static_cast<__int128>(g.codegree(u, x)) + g.codegree(v, x) - adjacent;
  return Rational(-sum, static_cast<__int128>(q));
}

std::pair<double, double> sum_sq_bounds(std::span<const double> values, double a, double delta) {
  if (values.empty()) throw PreconditionError("sum_sq_bounds needs at least one value");
  double sum = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(a - values[k]) > delta) {
      throw PreconditionError("sum_sq_bounds: |a - a_i| > delta at index " + std::to_string(k));
    }
    sum += values[k];
  }
  const double m = static_cast<double>(values.size());
  const double lower = sum * sum / m;
  return {lower, lower + 4.0 * m * delta * delta};
}

double product_sum_bound(std::span<const double> xs, std::span<const double> ys, double x,
                         double dx, double y, double dy) {
  if (xs.size() != ys.size()) throw PreconditionError("product_sum_bound: length mismatch");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(xs[k] - x) > dx) {
      throw PreconditionError("product_sum_bound: |x_i - x| > dx at index " + std::to_string(k));
    }
    if (std::abs(ys[k] - y) > dy) {
      throw PreconditionError("product_sum_bound: |y_i - y| > dy at index " + std::to_string(k));
    }
  }
  return 2.0 * static_cast<double>(xs.size()) * dx * dy;
}

double product_sum_discrepancy(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw PreconditionError("product_sum_discrepancy: bad lengths");
  double sxy = 0;
  double sx = 0;
  double sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += xs[k] * ys[k];
    sx += xs[k];
    sy += ys[k];
  }
  return std::abs(sxy - sx * sy / static_cast<double>(xs.size()));
}

double StoppingConfig::effective_alpha() const {
  if (alpha) return *alpha;
  return std::pow(3.0, 3 * M - 1);
}

StoppingFlags stopping_detect(const Snapshot& s, const StoppingConfig& config) {
  StoppingFlags f;
  f.approximate = !s.full_scan;
  if (s.n < 2) return f;
  const auto sc = scales_at(s.n, s.i);
  const double nd = static_cast<double>(s.n);
  f.tauQ = s.q_rel_dev >= config.kappa * sc.zeta * sc.zeta;
  f.tauY = s.y_max_abs_dev > config.effective_alpha() * std::sqrt(nd) * sc.p * sc.phi;
  f.tauC = static_cast<double>(s.y_max) > 2.0 * (nd * sc.p * sc.p + std::cbrt(nd));
  return f;
}

Snapshot capture_snapshot(const Graph& g, std::uint64_t seed, std::uint64_t step,
                          std::span<const PairId> pairs, const StoppingConfig& config) {
  Snapshot s;
  const std::uint64_t n = g.n();
  s.n = n;
  s.seed = seed;
  s.i = step;
  s.p = edge_density(n, step);
  s.edges = g.edge_count();
  s.Q = g.triangle_count();
  s.full_scan = pairs.empty();
  const double nd = static_cast<double>(n);
  const double target_y = nd * s.p * s.p;
  const double target_q = nd * nd * nd * s.p * s.p * s.p / 6.0;
  s.q_rel_dev = target_q > 0 ? std::abs(static_cast<double>(s.Q) / target_q - 1.0) : 0.0;

  std::uint32_t lo = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t hi = 0;
  double sum = 0;
  std::uint64_t count = 0;
  auto visit = [&](PairId id) {
    const auto y = g.codegree_at(id);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
    sum += y;
    ++count;
  };
  if (s.full_scan) {
    const auto total = choose2(n);
    for (PairId id = 0; id < total; ++id) visit(id);
  } else {
    for (auto id : pairs) visit(id);
  }
  s.sampled_pairs = count;
  if (count > 0) {
    s.y_min = lo;
    s.y_max = hi;
    s.y_mean = sum / static_cast<double>(count);
    s.y_max_abs_dev = std::max(std::abs(static_cast<double>(hi) - target_y),
                               std::abs(static_cast<double>(lo) - target_y));
    s.max_y_rel_dev = target_y > 0 ? s.y_max_abs_dev / target_y : 0.0;
  }
  s.flags = stopping_detect(s, config);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, end};
}

std::string snapshot_csv_row(const Snapshot& s) {
  std::ostringstream os;
  os << s.n << ',' << s.seed << ',' << s.i << ',' << format_double(s.p) << ',' << s.edges << ','
     << s.Q << ',' << format_double(s.q_rel_dev) << ',' << format_double(s.max_y_rel_dev) << ','
     << s.sampled_pairs << ',' << int{s.flags.tauQ} << ',' << int{s.flags.tauY} << ','
     << int{s.flags.tauC};
  return os.str();
}

namespace {

template <class T>
T parse_field(std::string_view field, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw PreconditionError(std::string("snapshot csv: bad ") + name + " field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

Snapshot parse_snapshot_csv_row(const std::string& line) {
  std::vector<std::string_view> fields;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    fields.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (fields.size() != 12) throw PreconditionError("snapshot csv: expected 12 fields");
  Snapshot s;
  s.n = parse_field<std::uint64_t>(fields[0], "n");
  s.seed = parse_field<std::uint64_t>(fields[1], "seed");
  s.i = parse_field<std::uint64_t>(fields[2], "i");
  s.p = parse_field<double>(fields[3], "p");
  s.edges = parse_field<std::uint64_t>(fields[4], "edges");
  s.Q = parse_field<std::uint64_t>(fields[5], "Q");
  s.q_rel_dev = parse_field<double>(fields[6], "Q_rel_dev");
  s.max_y_rel_dev = parse_field<double>(fields[7], "maxY_rel_dev");
  s.sampled_pairs = parse_field<std::uint64_t>(fields[8], "sampled_pairs");
  s.flags.tauQ = parse_field<int>(fields[9], "tauQ") != 0;
  s.flags.tauY = parse_field<int>(fields[10], "tauY") != 0;
  s.flags.tauC = parse_field<int>(fields[11], "tauC") != 0;
  s.full_scan = s.sampled_pairs == choose2(s.n);
  s.flags.approximate = !s.full_scan;
  return s;
}

std::vector<Snapshot> parse_snapshot_csv(const std::string& text) {
  std::vector<Snapshot> out;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kSnapshotCsvHeader) {
    throw PreconditionError("snapshot csv: missing or wrong header");
  }
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(parse_snapshot_csv_row(line));
  }
  return out;
}

}  // namespace trirem

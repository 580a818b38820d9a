#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "trirem/errors.hpp"
#include "trirem/homcount.hpp"
#include "trirem/ladders.hpp"

using namespace trirem;

namespace {

std::uint64_t falling(std::uint64_t top, std::uint64_t count) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < count; ++k) out *= top - k;
  return out;
}

std::vector<ExtensionGraph> small_extensions() {
  std::vector<ExtensionGraph> out;
  for (const auto& w : enumerate_bounded_family(4)) {
    if (w.size() > 4) continue;
    out.push_back(ladder_extension(w));
  }
  // A few with other root sets.
  out.push_back(ExtensionGraph({0, 1, 2}, {{0, 2}, {1, 2}}, {0, 1}));
  out.push_back(ExtensionGraph({0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0}));
  out.push_back(ExtensionGraph({0, 1, 2, 3, 4}, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {2, 4}}, {0, 1}));
  out.push_back(ExtensionGraph({0, 1, 2, 3}, {{1, 2}}, {}));
  out.push_back(ExtensionGraph({0, 1, 2, 3}, {{0, 3}, {1, 3}, {2, 3}}, {0, 1, 2}));
  return out;
}

}  // namespace

TEST_SUITE("homcount") {
  TEST_CASE("psi examples on K4") {
    const auto k4 = Graph::complete(4);
    const ExtensionGraph cherry({0, 1, 2}, {{0, 2}, {1, 2}}, {0, 1});
    const std::vector<Vertex> phi = {0, 3};
    CHECK(psi(cherry, phi, k4) == 2);
    CHECK(psi(ladder_extension("e"), phi, k4) == 2);
    CHECK(psi_ladder("e", 0, 3, k4) == 2);
    CHECK(psi_ladder("", 0, 3, k4) == 1);
    CHECK_THROWS_AS(psi_ladder("1", 2, 2, k4), PreconditionError);

    const std::vector<Vertex> repeated = {1, 1};
    CHECK_THROWS_AS(psi(cherry, repeated, k4), PreconditionError);
    const std::vector<Vertex> short_map = {1};
    CHECK_THROWS_AS(psi(cherry, short_map, k4), PreconditionError);
    const std::vector<Vertex> far = {1, 9};
    CHECK_THROWS_AS(psi(cherry, far, k4), PreconditionError);
  }

  TEST_CASE("psi matches naive injection enumeration") {
    SplitMix64 rng(8080);
    const auto hs = small_extensions();
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 5 + static_cast<int>(rng.uniform_below(4));
      const auto g = Graph::from_edges(static_cast<Vertex>(n), oracle::random_edges(n, 0.5 + 0.4 * rng.uniform01(), rng));
      const auto m = oracle::Matrix::from(g);
      for (const auto& h : hs) {
        std::vector<Vertex> phi;
        while (phi.size() < h.iota()) {
          const auto x = static_cast<Vertex>(rng.uniform_below(n));
          if (std::find(phi.begin(), phi.end(), x) == phi.end()) phi.push_back(x);
        }
        REQUIRE(psi(h, phi, g) == oracle::naive_psi(h, phi, m));
      }
    }
  }

  TEST_CASE("complete graph falling factorial") {
    const auto hs = small_extensions();
    for (Vertex big : {7U, 9U, 12U}) {
      const auto g = Graph::complete(big);
      for (const auto& h : hs) {
        std::vector<Vertex> phi;
        for (Vertex k = 0; k < h.iota(); ++k) phi.push_back(big - 1 - 2 * k);
        CHECK(psi(h, phi, g) == falling(big - h.iota(), h.v() - h.iota()));
      }
    }
    // Larger ladders on a bigger host, count n^k-ish with full 64-bit range.
    const auto g = Graph::complete(70);
    CHECK(psi_ladder("11111", 3, 4, g) == falling(68, 5));
  }

  TEST_CASE("cherry and pendant counts") {
    const ExtensionGraph cherry({0, 1, 2}, {{0, 2}, {1, 2}}, {0, 1});
    const ExtensionGraph pendant({0, 1, 2}, {{0, 2}}, {0, 1});
    SplitMix64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_below(9));
      const auto g = Graph::from_edges(static_cast<Vertex>(n), oracle::random_edges(n, rng.uniform01(), rng));
      for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
        for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
          if (u == v) continue;
          const std::vector<Vertex> phi = {u, v};
          REQUIRE(psi(cherry, phi, g) == g.codegree(u, v));
          REQUIRE(psi(pendant, phi, g) == g.degree(u) - (g.has_edge(u, v) ? 1U : 0U));
        }
    }
  }

  TEST_CASE("psi never grows along a deletion sequence") {
    SplitMix64 rng(99);
    auto g = Graph::complete(11);
    auto edges = g.edges();
    shuffle(std::span(edges), rng);
    const std::vector<std::string> words = {"1", "e", "11", "1e", "111", "110", "ee", "e11"};
    std::vector<std::uint64_t> last(words.size(), UINT64_MAX);
    for (const auto& [a, b] : edges) {
      g.delete_edge(a, b);
      for (std::size_t k = 0; k < words.size(); ++k) {
        const auto now = psi_ladder(words[k], 2, 7, g);
        REQUIRE(now <= last[k]);
        last[k] = now;
      }
    }
    for (auto x : last) CHECK(x == 0);
  }

  TEST_CASE("X examples on complete graphs") {
    for (Vertex big : {5U, 20U, 64U}) {
      const auto g = Graph::complete(big);
      CHECK(x_variable("1", 0, 1, g, big, 1.0) == -2.0);
      CHECK(x_variable("e", 0, 1, g, big, 1.0) == -2.0);
      const auto parts = x_components("11", 0, 1, g, big, 1.0);
      CHECK(parts.psi == std::uint64_t{big - 2} * (big - 3));
      CHECK(parts.psi_prefix == big - 2);
      CHECK(parts.ratio_scale == double(big));
    }
    CHECK_THROWS_AS(x_variable("", 0, 1, Graph::complete(4), 4, 1.0), PreconditionError);
    CHECK_THROWS_AS(x_variable("e0", 0, 1, Graph::complete(4), 4, 1.0), PreconditionError);
  }

  TEST_CASE("X equals the brute-force combination on random graphs") {
    SplitMix64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 6 + static_cast<int>(rng.uniform_below(4));
      const auto g = Graph::from_edges(static_cast<Vertex>(n), oracle::random_edges(n, 0.7, rng));
      const auto m = oracle::Matrix::from(g);
      const double p = 0.3 + 0.6 * rng.uniform01();
      for (const std::string w : {"1", "e", "11", "1e", "111", "e11"}) {
        const std::vector<Vertex> phi = {0, 1};
        const auto full = oracle::naive_psi(ladder_extension(w), phi, m);
        const std::string prefix = w.substr(0, w.size() - 1);
        const auto pre = prefix.empty() ? 1 : oracle::naive_psi(ladder_extension(prefix), phi, m);
        const double theta = w.back() == 'e' ? 1 : 2;
        const double expect = double(full) - n * std::pow(p, theta) * double(pre);
        CHECK(x_variable(w, 0, 1, g, n, p) == doctest::Approx(expect));
      }
    }
  }

  TEST_CASE("audit guard and trivial cases") {
    HomAuditConfig big;
    big.max_word_length = 5;
    CHECK_THROWS_AS(ConcentrationAudit(2000, big), ResourceGuardError);
    CHECK_NOTHROW(ConcentrationAudit(1500, big));
    HomAuditConfig ok;
    ok.max_word_length = 4;
    CHECK_NOTHROW(ConcentrationAudit(5000, ok));

    // Edgeless host: every count is zero, so every ratio is zero.
    HomAuditConfig cfg;
    cfg.pair_count = 5;
    ConcentrationAudit audit(50, cfg);
    const auto empty = Graph::empty(50);
    Snapshot s;
    s.n = 50;
    s.i = 0;
    s.p = 1;
    audit.observe(empty, s);
    for (const auto& e : audit.report().entries) {
      if (e.word.size() >= 2) CHECK(e.max_ratio == 0.0);
    }
    CHECK(audit.report().pairs.size() == 5);
  }

  TEST_CASE("K_n initial snapshot ratio is tiny") {
    HomAuditConfig cfg;
    cfg.pair_count = 10;
    const std::uint64_t n = 200;
    ConcentrationAudit audit(n, cfg);
    Snapshot s;
    s.n = n;
    audit.observe(Graph::complete(n), s);
    const double zeta = std::log(double(n)) / std::sqrt(double(n));
    bool saw = false;
    for (const auto& e : audit.report().entries) {
      if (e.word != "1") continue;
      CHECK(e.max_ratio == doctest::Approx(2.0 / (6561.0 * zeta * double(n))));
      saw = true;
    }
    CHECK(saw);
    // The largest ratio belongs to "ee1", whose weight is only 9.
    CHECK(audit.report().max_ratio < 0.01);
    CHECK_FALSE(audit.report().exceeded());
  }

  TEST_CASE("hom_audit end to end") {
    HomAuditConfig cfg;
    cfg.p_min = 0.6;
    cfg.pair_count = 6;
    cfg.max_word_length = 2;
    cfg.snapshot_dp = 0.1;
    cfg.seed = 3;
    const auto r = hom_audit(60, cfg);
    CHECK(r.snapshots >= 4);
    CHECK(r.entries.size() == r.snapshots * r.words.size());
    for (const auto& e : r.entries) CHECK(e.p >= 0.6);
    const auto j = nlohmann::json::parse(audit_report_json(r));
    CHECK(j["schema_version"] == 1);
    CHECK(j["entries"].size() == r.entries.size());
    CHECK(j["max_ratio"].get<double>() == r.max_ratio);
    // Same seed, same report.
    CHECK(audit_report_json(hom_audit(60, cfg)) == audit_report_json(r));
  }
}

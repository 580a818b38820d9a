#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "trirem/errors.hpp"
#include "trirem/trajectory.hpp"

using namespace trirem;

TEST_SUITE("trajectory") {
  TEST_CASE("scales examples") {
    const auto s = scales_at(1000, 0);
    CHECK(s.p == 1.0);
    CHECK(s.predicted_edges == 499500.0);
    CHECK(s.predicted_codegree == 1000.0);

    for (std::uint64_t n : {12U, 120U, 1200U}) CHECK(scales_at(n, n * n / 12).p == doctest::Approx(0.5).epsilon(1e-15));

    const auto big = scales_at(10000, 0);
    CHECK(big.zeta == doctest::Approx(0.0921034).epsilon(1e-6));
    CHECK(big.phi == doctest::Approx(std::log(10000.0)));
  }

  TEST_CASE("scales domain") {
    CHECK_THROWS_AS(scales_at(1, 0), DomainError);
    CHECK_THROWS_AS(scales_at(6, 6), DomainError);
    CHECK_NOTHROW(scales_at(6, 5));
  }

  TEST_CASE("phi stays within [log n, e log n] while p >= n^-1/2") {
    for (std::uint64_t n : {16U, 100U, 1000U}) {
      const double logn = std::log(double(n));
      for (std::uint64_t i = 0; edge_density(n, i) >= 1.0 / std::sqrt(double(n)); i += 1 + n / 7) {
        const auto s = scales_at(n, i);
        CHECK(s.phi / logn >= 1.0 - 1e-12);
        CHECK(s.phi / logn <= std::exp(1.0) + 1e-12);
      }
    }
  }

  TEST_CASE("predicted edges equal C(n,2) - 3i exactly") {
    for (std::uint64_t i = 0; i < 1000; i += 37) {
      CHECK(scales_at(100, i).predicted_edges == double(choose2(100) - 3 * i));
    }
  }

  TEST_CASE("step_at_density") {
    CHECK(step_at_density(100, 1.0) == 0);
    CHECK(step_at_density(120, 0.5) == 1200);
    for (std::uint64_t n : {7U, 100U, 512U, 2000U}) {
      for (double target : {0.9, 0.5, 0.3, 0.1, 0.01}) {
        const auto i = step_at_density(n, target);
        CHECK(edge_density(n, i) <= target);
        if (i > 0) CHECK(edge_density(n, i - 1) > target);
      }
    }
  }

  TEST_CASE("expected_dQ examples") {
    CHECK(expected_dQ(Graph::complete(4)) == Rational(-4));
    CHECK(expected_dQ(Graph::complete(5)) == Rational(-7));
    const std::vector<std::pair<Vertex, Vertex>> two = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    CHECK(expected_dQ(Graph::from_edges(6, two)) == Rational(-1));
    CHECK_THROWS_AS(expected_dQ(Graph::empty(4)), DomainError);
    // Every removal from K4 lowers Q by exactly 4.
    const auto m = oracle::Matrix::from(Graph::complete(4));
    for (const auto& t : m.triangles()) {
      auto next = m;
      next.remove_triangle(t);
      CHECK(next.triangles().empty());
    }
  }

  TEST_CASE("expected_dY examples") {
    const auto k4 = Graph::complete(4);
    CHECK(expected_dY(k4, 0, 1) == Rational(-3, 2));
    CHECK_THROWS_AS(expected_dY(k4, 2, 2), PreconditionError);
    const std::vector<std::pair<Vertex, Vertex>> tri_plus = {{0, 1}, {0, 2}, {1, 2}, {3, 4}};
    const auto g = Graph::from_edges(5, tri_plus);
    CHECK(expected_dY(g, 3, 4) == Rational(0));
    CHECK(expected_dY(g, 0, 3) == Rational(0));
  }

  TEST_CASE("drifts match exhaustive expectation on random graphs with n <= 8") {
    SplitMix64 rng(31337);
    int checked = 0;
    while (checked < 150) {
      const int n = 3 + static_cast<int>(rng.uniform_below(6));
      const auto edges = oracle::random_edges(n, 0.3 + 0.7 * rng.uniform01(), rng);
      const auto g = Graph::from_edges(static_cast<Vertex>(n), edges);
      if (g.triangle_count() == 0) continue;
      ++checked;
      const auto m = oracle::Matrix::from(g);
      REQUIRE(expected_dQ(g) == oracle::exhaustive_dQ(m));
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          REQUIRE(expected_dY(g, static_cast<Vertex>(u), static_cast<Vertex>(v)) ==
                  oracle::exhaustive_dY(m, u, v));
    }
  }

  TEST_CASE("sum_sq_bounds examples") {
    const std::vector<double> a = {1, 1, 1};
    CHECK(sum_sq_bounds(a, 1, 0) == std::pair<double, double>{3, 3});
    const std::vector<double> b = {0, 2};
    CHECK(sum_sq_bounds(b, 1, 1) == std::pair<double, double>{2, 10});
    const std::vector<double> c = {1, 3};
    CHECK(sum_sq_bounds(c, 2, 1) == std::pair<double, double>{8, 16});
    const std::vector<double> bad = {1, 5, 1};
    CHECK_THROWS_WITH_AS(sum_sq_bounds(bad, 1, 1), doctest::Contains("index 1"), PreconditionError);
  }

  TEST_CASE("product_sum_bound examples") {
    const std::vector<double> ones = {1, 1};
    CHECK(product_sum_bound(ones, ones, 1, 0, 1, 0) == 0);
    CHECK(product_sum_discrepancy(ones, ones) == 0);
    const std::vector<double> z2 = {0, 2};
    CHECK(product_sum_bound(z2, z2, 1, 1, 1, 1) == 4);
    CHECK(product_sum_discrepancy(z2, z2) == 2);
    const std::vector<double> up = {1, 2, 3};
    const std::vector<double> down = {3, 2, 1};
    CHECK(product_sum_bound(up, down, 2, 1, 2, 1) == 6);
    CHECK(product_sum_discrepancy(up, down) == 2);
    CHECK_THROWS_AS(product_sum_bound(up, ones, 2, 1, 1, 0), PreconditionError);
    CHECK_THROWS_AS(product_sum_bound(up, down, 2, 0.5, 2, 1), PreconditionError);
  }

  TEST_CASE("concentration bounds hold on random inputs") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
      const std::size_t m = 1 + rng.uniform_below(40);
      const double a = 20 * rng.uniform01() - 10;
      const double delta = 5 * rng.uniform01();
      const double b = 20 * rng.uniform01() - 10;
      const double eps = 5 * rng.uniform01();
      std::vector<double> xs(m);
      std::vector<double> ys(m);
      double sq = 0;
      for (std::size_t k = 0; k < m; ++k) {
        xs[k] = a + delta * (2 * rng.uniform01() - 1);
        ys[k] = b + eps * (2 * rng.uniform01() - 1);
        sq += xs[k] * xs[k];
      }
      const auto [lo, hi] = sum_sq_bounds(xs, a, delta);
      const double slack = 1e-9 * (1 + std::abs(sq));
      REQUIRE(lo <= sq + slack);
      REQUIRE(sq <= hi + slack);
      REQUIRE(product_sum_discrepancy(xs, ys) <= product_sum_bound(xs, ys, a, delta, b, eps) + slack);
    }
  }

  TEST_CASE("stopping_detect examples") {
    StoppingConfig cfg;
    cfg.kappa = 10;
    cfg.alpha = 1;
    const auto k100 = Graph::complete(100);
    const auto s = capture_snapshot(k100, 0, 0, {}, cfg);
    CHECK(s.Q == choose3(100));
    CHECK_FALSE(s.flags.tauQ);
    CHECK_FALSE(s.flags.tauY);
    CHECK_FALSE(s.flags.tauC);
    CHECK_FALSE(s.flags.approximate);

    for (std::uint64_t n : {16U, 64U, 500U}) {
      const auto k = capture_snapshot(Graph::complete(static_cast<Vertex>(n)), 0, 0, {}, cfg);
      CHECK(k.y_max_abs_dev == 2.0);
      CHECK_FALSE(k.flags.tauY);
    }

    // Q twice its prediction: relative deviation 1 >= kappa zeta^2 whenever kappa <= zeta^-2.
    Snapshot fake;
    fake.n = 400;
    fake.i = 4000;
    fake.full_scan = true;
    fake.q_rel_dev = 1.0;
    const double zeta = scales_at(400, 4000).zeta;
    for (double kappa : {1.0, 0.5 / (zeta * zeta), std::nextafter(1.0 / (zeta * zeta), 0.0)}) {
      StoppingConfig c;
      c.kappa = kappa;
      CHECK(stopping_detect(fake, c).tauQ);
    }
    StoppingConfig loose;
    loose.kappa = 2.0 / (zeta * zeta);
    CHECK_FALSE(stopping_detect(fake, loose).tauQ);

    fake.y_max = 1000;
    CHECK(stopping_detect(fake, cfg).tauC);
    CHECK(StoppingConfig{}.effective_alpha() == 6561.0);
  }

  TEST_CASE("sampled snapshots are labelled approximate") {
    const auto g = Graph::complete(10);
    const std::vector<PairId> pairs = {0, 5, 9};
    const auto s = capture_snapshot(g, 3, 0, pairs, StoppingConfig{});
    CHECK(s.sampled_pairs == 3);
    CHECK(s.flags.approximate);
    CHECK(s.y_min == 8);
    CHECK(s.y_max == 8);
  }

  TEST_CASE("snapshot CSV round trip") {
    Snapshot s;
    s.n = 1000;
    s.seed = 42;
    s.i = 12345;
    s.p = edge_density(1000, 12345);
    s.edges = choose2(1000) - 3 * 12345;
    s.Q = 987654;
    s.q_rel_dev = 0.0123456789012345;
    s.max_y_rel_dev = 1.0 / 3.0;
    s.sampled_pairs = choose2(1000);
    s.full_scan = true;
    s.flags.tauQ = true;
    s.flags.tauC = true;
    const std::string text = std::string(kSnapshotCsvHeader) + "\n" + snapshot_csv_row(s) + "\n";
    const auto back = parse_snapshot_csv(text);
    REQUIRE(back.size() == 1);
    const auto& r = back[0];
    CHECK(r.n == s.n);
    CHECK(r.seed == s.seed);
    CHECK(r.i == s.i);
    CHECK(r.p == s.p);
    CHECK(r.edges == s.edges);
    CHECK(r.Q == s.Q);
    CHECK(r.q_rel_dev == s.q_rel_dev);
    CHECK(r.max_y_rel_dev == s.max_y_rel_dev);
    CHECK(r.sampled_pairs == s.sampled_pairs);
    CHECK(r.full_scan);
    CHECK(r.flags.tauQ);
    CHECK_FALSE(r.flags.tauY);
    CHECK(r.flags.tauC);
    CHECK(snapshot_csv_row(r) == snapshot_csv_row(s));

    CHECK_THROWS_AS(parse_snapshot_csv("wrong,header\n"), PreconditionError);
    CHECK_THROWS_AS(parse_snapshot_csv_row("1,2,3"), PreconditionError);
  }
}

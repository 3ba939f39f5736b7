#include "oracles.hpp"
#include "sena/wilcoxon.hpp"

#include <doctest.h>

using namespace sena;

TEST_CASE("paired example with every difference negative") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
  const auto r = wilcoxon_signed_rank(a, b);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_two_sided == 0.0625);
  CHECK(r.exact);
  CHECK(r.n == 5);
  const auto s = wilcoxon_signed_rank(b, a);
  CHECK(s.p_two_sided == r.p_two_sided);
  CHECK(s.statistic == 15.0);
}

TEST_CASE("insufficient data and bad input") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, a), InsufficientDataError);
  const std::vector<double> b{1, 2, 3, 4, 5, 7};
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, b), InsufficientDataError);
  const std::vector<double> c{1, 2, 3};
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, c), std::invalid_argument);
}

TEST_CASE("ranks average ties") {
  const std::vector<double> d{-1, 2, 2, -3, 2};
  const auto r = signed_rank_abs_ranks(d);
  CHECK(r == oracle::abs_ranks(d));
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 3.0);
  CHECK(r[3] == 5.0);
}

TEST_CASE("exact p matches full enumeration") {
  std::mt19937 rng(2024);
  for (int n = 1; n <= 10; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<int> diff(-6, 6);
      std::vector<double> d;
      while (static_cast<int>(d.size()) < n) {
        const int v = diff(rng);
        if (v != 0) d.push_back(v);
      }
      const auto ranks = signed_rank_abs_ranks(d);
      double w = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0) w += ranks[i];
      }
      CHECK(std::abs(wilcoxon_exact_p(ranks, w) - oracle::wilcoxon_enumerated_p(ranks, w)) <= 1e-12);
    }
  }
}

TEST_CASE("two-sided p is symmetric and bounded") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g(0, 1);
  for (int n : {6, 12, 15, 20, 40}) {
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = g(rng);
      b[static_cast<std::size_t>(i)] = g(rng) + 0.3;
    }
    const auto ab = wilcoxon_signed_rank(a, b);
    const auto ba = wilcoxon_signed_rank(b, a);
    CHECK(ab.p_two_sided == doctest::Approx(ba.p_two_sided).epsilon(1e-12));
    CHECK(ab.p_two_sided > 0.0);
    CHECK(ab.p_two_sided <= 1.0);
    CHECK(ab.exact == (n <= kWilcoxonExactLimit));
  }
}

TEST_CASE("normal approximation against the exact p at n = 15") {
  std::vector<double> ranks(15);
  for (int i = 0; i < 15; ++i) ranks[static_cast<std::size_t>(i)] = i + 1;
  double worst = 0, worst_tail = 0;
  for (int w = 0; w <= 120; ++w) {
    const double exact = wilcoxon_exact_p(ranks, w);
    const double gap = std::abs(exact - wilcoxon_normal_p(ranks, w));
    worst = std::max(worst, gap);
    if (exact <= 0.3) worst_tail = std::max(worst_tail, gap);
  }
  CHECK(worst_tail <= 0.01);
  // the central gap of the continuity-corrected approximation peaks at W = 46
  CHECK(worst == doctest::Approx(0.0110536).epsilon(1e-4));
}

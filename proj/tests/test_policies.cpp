#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "prophet/policies.hpp"
#include "prophet/rng.hpp"

using namespace prophet;

TEST_CASE("fixed threshold and randomized threshold with q = 1 are trace-equivalent") {
  Policy fixed{Policy::Variant{FixedThreshold{1.3}}};
  Policy rand1{Policy::Variant{RandomizedThreshold{1.3, 1.0}}};
  for (std::uint64_t run = 0; run < 10000; ++run) {
    RunRng values(42, run, 0), coins(42, run, 1), ties(42, run, 2);
    RunState sa, sb;
    for (std::int64_t i = 1; i <= 12; ++i) {
      double x = 3.0 * values.next_double();
      double tie = ties.next_double();
      double coin = coins.next_double();
      REQUIRE(fixed.step(i, x, tie, coin, sa) == rand1.step(i, x, tie, coin, sb));
    }
  }
}

TEST_CASE("randomized threshold accepts iff above threshold and coin under q") {
  Policy p{Policy::Variant{RandomizedThreshold{2.0, 0.4}}};
  RunState st;
  CHECK(p.step(1, 2.5, 0.0, 0.39, st));
  CHECK_FALSE(p.step(1, 2.5, 0.0, 0.41, st));
  CHECK_FALSE(p.step(1, 1.9, 0.0, 0.0, st));
  CHECK(p.step(1, 2.0, 0.0, 0.0, st));  // threshold is inclusive
}

TEST_CASE("step thresholds accept everything beyond the listed steps") {
  Policy p{Policy::Variant{StepThresholds{{5.0, 3.0}}}};
  RunState st;
  CHECK_FALSE(p.step(1, 4.0, 0.0, 0.0, st));
  CHECK(p.step(2, 4.0, 0.0, 0.0, st));
  CHECK(p.step(3, 0.0, 0.0, 0.0, st));  // continuation value is zero there
}

TEST_CASE("secretary rule takes the first record at or after r, ties via uniforms") {
  Policy p{Policy::Variant{SecretaryRule{3}}};
  RunState st;
  CHECK_FALSE(p.step(1, 5.0, 0.5, 0.0, st));  // record, but i < r
  CHECK_FALSE(p.step(2, 7.0, 0.5, 0.0, st));  // record, but i < r
  CHECK_FALSE(p.step(3, 6.0, 0.5, 0.0, st));  // not a record
  CHECK_FALSE(p.step(4, 7.0, 0.4, 0.0, st));  // tie with lower auxiliary: not a record
  CHECK(p.step(5, 7.0, 0.9, 0.0, st));        // tie with higher auxiliary: a record
}

TEST_CASE("waiting index satisfies the harmonic criterion") {
  CHECK(secretary_waiting_index(1) == 1);
  CHECK(secretary_waiting_index(3) == 2);
  CHECK(secretary_waiting_index(100) == 38);
  CHECK(secretary_waiting_index(10000) == 3680);
  for (std::int64_t m : {2LL, 5LL, 17LL, 100LL, 999LL, 10000LL}) {
    std::int64_t r = secretary_waiting_index(m);
    double tail = 0.0;
    for (std::int64_t k = r; k <= m - 1; ++k) tail += 1.0 / static_cast<double>(k);
    CHECK(tail <= 1.0 + 1e-12);
    if (r > 1) CHECK(tail + 1.0 / static_cast<double>(r - 1) > 1.0);
    // r/m hugs 1/e for large m.
    if (m >= 1000)
      CHECK(static_cast<double>(r) / static_cast<double>(m) ==
            Catch::Approx(std::exp(-1.0)).margin(0.01));
  }
}

TEST_CASE("sp guarantee values and monotonicity") {
  CHECK(sp_guarantee(0.5) == Catch::Approx(0.078381).margin(1e-6));
  CHECK(sp_guarantee(0.25) == Catch::Approx(0.055033).margin(1e-6));
  double prev = 0.0;
  for (double le = -3.0; le <= 3.0; le += 0.125) {
    double g = sp_guarantee(std::pow(10.0, le));
    CHECK(g > prev);
    prev = g;
  }
  // eps -> infinity limit: (1/e)(1 - (1 - 1/e)) = e^-2.
  CHECK(sp_guarantee(1e9) == Catch::Approx(std::exp(-2.0)).margin(1e-6));
  CHECK_THROWS_AS(sp_guarantee(0.0), std::invalid_argument);
}

TEST_CASE("ex-ante threshold: continuous values hit the quantile exactly") {
  for (double mu : {1.2, 2.0, 5.0, 39.0 / 20.0}) {
    ValueDist U = ValueDist::uniform(1.0, 4.0);
    ExAnteThreshold th = select_ex_ante_threshold(U, mu);
    CHECK(th.q == 1.0);
    CHECK(U.tail(th.p) * th.q == Catch::Approx(1.0 / mu).margin(1e-12));
    ValueDist P = ValueDist::pareto(0.7);
    th = select_ex_ante_threshold(P, mu);
    CHECK(th.q == 1.0);
    CHECK(P.tail(th.p) * th.q == Catch::Approx(1.0 / mu).margin(1e-12));
  }
}

TEST_CASE("ex-ante threshold: atomic straddle compensates with q") {
  // Two-point at {1, 2} with P(X = 2) = 1/4 and mu = 2: the jump at 1
  // straddles 1/2, so p = 1 and q = 1/2.
  ValueDist X = ValueDist::two_point(1.0, 2.0, 0.25);
  ExAnteThreshold th = select_ex_ante_threshold(X, 2.0);
  CHECK(th.p == 1.0);
  CHECK(th.q == Catch::Approx(0.5));
  // Straddle postcondition on random atomics.
  for (std::uint64_t i = 0; i < 100; ++i) {
    RunRng rng(31337, i, 0);
    std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 4);
    std::vector<double> atoms(n), probs(n);
    for (auto& a : atoms) a = 10.0 * rng.next_open();
    std::sort(atoms.begin(), atoms.end());
    for (std::size_t k = 1; k < n; ++k)
      if (atoms[k] <= atoms[k - 1]) atoms[k] = atoms[k - 1] + 1e-6;
    for (auto& p : probs) p = 0.1 + rng.next_double();
    ValueDist A = ValueDist::atomic(std::move(atoms), std::move(probs), true);
    double mu = 1.0 + 9.0 * rng.next_double();
    ExAnteThreshold t = select_ex_ante_threshold(A, mu);
    CHECK(A.tail(t.p) * t.q == Catch::Approx(1.0 / mu).margin(1e-12));
    CHECK(1.0 - A.cdf(t.p) <= 1.0 / mu + 1e-12);  // P(X > p) <= 1/mu <= P(X >= p)
    CHECK(t.q <= 1.0 + 1e-12);
  }
  // Exact quantile hit keeps q = 1.
  ValueDist E = ValueDist::two_point(1.0, 2.0, 0.5);
  ExAnteThreshold te = select_ex_ante_threshold(E, 2.0);
  CHECK(te.p == 2.0);
  CHECK(te.q == 1.0);
}

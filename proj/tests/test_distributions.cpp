#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "prophet/distributions.hpp"
#include "prophet/rng.hpp"

using namespace prophet;

namespace {

// Random finite horizon table used by the property sections.
HorizonDist random_table(std::uint64_t idx) {
  RunRng rng(98123, idx, 0);
  std::int64_t m = 2 + static_cast<std::int64_t>(rng.next_u64() % 30);
  std::vector<std::int64_t> sup(static_cast<std::size_t>(m));
  std::vector<double> pmf(sup.size());
  for (std::int64_t h = 1; h <= m; ++h) {
    sup[static_cast<std::size_t>(h - 1)] = h;
    pmf[static_cast<std::size_t>(h - 1)] = 0.05 + rng.next_double();
  }
  return HorizonDist::finite(std::move(sup), std::move(pmf), true);
}

}  // namespace

TEST_CASE("finite horizon construction validates input") {
  CHECK_THROWS_AS(HorizonDist::finite({1, 2}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(HorizonDist::finite({2, 1}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(HorizonDist::finite({0, 1}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(HorizonDist::finite({1, 2}, {0.5, -0.5}), std::invalid_argument);
  // Outside the 1e-12 tolerance: rejected, not silently renormalized.
  CHECK_THROWS_AS(HorizonDist::finite({1, 2}, {0.6, 0.5}), std::invalid_argument);
  CHECK_NOTHROW(HorizonDist::finite({1, 2}, {0.6, 0.5}, true));
  HorizonDist H = HorizonDist::finite({1, 2}, {0.6, 0.6}, true);
  CHECK(H.pmf_at(1) == Catch::Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(HorizonDist::geometric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HorizonDist::geometric(1.0), std::invalid_argument);
}

TEST_CASE("survival table 1, 1/2, 1/4, 1/5 on h = 1..4") {
  HorizonDist H = HorizonDist::finite({1, 2, 3, 4}, {0.5, 0.25, 0.05, 0.2});
  CHECK(H.survival(1) == Catch::Approx(1.0));
  CHECK(H.survival(2) == Catch::Approx(0.5));
  CHECK(H.survival(3) == Catch::Approx(0.25));
  CHECK(H.survival(4) == Catch::Approx(0.2));
  CHECK(H.survival(5) == 0.0);
  CHECK(H.mean() == Catch::Approx(39.0 / 20.0).epsilon(1e-15));
  // Hazard is pmf/S, and 1 beyond the top of the support.
  CHECK(H.hazard(1) == Catch::Approx(0.5));
  CHECK(H.hazard(2) == Catch::Approx(0.5));
  CHECK(H.hazard(3) == Catch::Approx(0.2));
  CHECK(H.hazard(4) == Catch::Approx(1.0));
  CHECK(H.hazard(9) == 1.0);
  // pgf from the pmf directly.
  double t = 0.37;
  double expect = 0.5 * t + 0.25 * t * t + 0.05 * t * t * t + 0.2 * t * t * t * t;
  CHECK(H.pgf(t) == Catch::Approx(expect).epsilon(1e-14));
}

TEST_CASE("zipf(20, 0.3) normalizer, mean and variance") {
  HorizonDist H = HorizonDist::zipf(20, 0.3);
  double Z = 1.0 / H.pmf_at(1);  // pmf(1) = 1/Z
  CHECK(Z == Catch::Approx(10.9296).margin(5e-4));
  CHECK(H.variance() == Catch::Approx(34.6455).margin(5e-4));
  CHECK(H.moment(2) - H.mean() * H.mean() == Catch::Approx(H.variance()).epsilon(1e-12));
}

TEST_CASE("geometric horizon closed forms") {
  double q = 0.7;
  HorizonDist H = HorizonDist::geometric(q);
  CHECK(H.mean() == Catch::Approx(1.0 / (1.0 - q)).epsilon(1e-15));
  CHECK(H.variance() == Catch::Approx(q / ((1.0 - q) * (1.0 - q))).epsilon(1e-15));
  CHECK(H.survival(5) == Catch::Approx(std::pow(q, 4.0)).epsilon(1e-15));
  for (std::int64_t h = 1; h <= 10; ++h) CHECK(H.hazard(h) == Catch::Approx(1.0 - q));
  // pgf closed form against the truncated table sum.
  HorizonDist T = H.truncated(1e-13);
  for (double t : {0.1, 0.5, 0.9, 0.99})
    CHECK(H.pgf(t) == Catch::Approx(T.pgf(t)).margin(1e-10));
}

TEST_CASE("truncation collapses the geometric tail onto the last point") {
  HorizonDist H = HorizonDist::geometric(0.9);
  HorizonDist T = H.truncated(1e-12);
  detail::Kahan mass;
  for (double p : T.pmf()) mass.add(p);
  CHECK(mass.sum() == Catch::Approx(1.0).margin(1e-12));
  CHECK(T.mean() == Catch::Approx(H.mean()).margin(1e-8));
  CHECK(T.survival(2) == Catch::Approx(H.survival(2)).margin(1e-12));
}

TEST_CASE("inverse-cdf sampling lands on the support with the right masses") {
  HorizonDist H = HorizonDist::finite({1, 3, 7}, {0.2, 0.5, 0.3});
  CHECK(H.sample(0.0) == 1);
  CHECK(H.sample(0.1999) == 1);
  CHECK(H.sample(0.2001) == 3);
  CHECK(H.sample(0.6999) == 3);
  CHECK(H.sample(0.7001) == 7);
  CHECK(H.sample(0.999999) == 7);
  HorizonDist G = HorizonDist::geometric(0.5);
  CHECK(G.sample(0.0) == 1);
  CHECK(G.sample(0.49) == 1);
  CHECK(G.sample(0.51) == 2);
  CHECK(G.sample(0.76) == 3);
}

TEST_CASE("moments satisfy Cauchy-Schwarz and pgf is monotone on random tables") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    HorizonDist H = random_table(i);
    CHECK(H.moment(2) >= H.mean() * H.mean() - 1e-12);
    double prev = 0.0;
    for (int j = 1; j <= 1024; ++j) {
      double t = static_cast<double>(j) / 1024.0;
      double v = H.pgf(t);
      CHECK(v >= prev - 1e-14);
      prev = v;
    }
    CHECK(H.pgf(1.0) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("value distribution construction validates input") {
  CHECK_THROWS_AS(ValueDist::atomic({2.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ValueDist::atomic({-1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ValueDist::atomic({1.0, 2.0}, {0.7, 0.5}), std::invalid_argument);
  CHECK_NOTHROW(ValueDist::atomic({1.0, 2.0}, {0.7, 0.5}, true));
  CHECK_THROWS_AS(ValueDist::two_point(2.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ValueDist::pareto(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ValueDist::uniform(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("pareto closed forms") {
  double eps = 0.5;
  ValueDist X = ValueDist::pareto(eps);
  CHECK(X.mean() == Catch::Approx((1.0 + eps) / eps).epsilon(1e-15));
  CHECK(X.cdf(2.0) == Catch::Approx(1.0 - std::pow(2.0, -1.5)).epsilon(1e-15));
  CHECK(X.cdf(0.5) == 0.0);
  TailStats ts = X.tail_stats(3.0);
  CHECK(ts.tail == Catch::Approx(std::pow(3.0, -1.5)).epsilon(1e-15));
  CHECK(ts.cond_mean == Catch::Approx(3.0 * 3.0).epsilon(1e-15));  // (1 + 1/eps) pi
  // Quantile inverts the cdf.
  for (double u : {0.0, 0.3, 0.9, 0.999}) CHECK(X.cdf(X.quantile(u)) == Catch::Approx(u).margin(1e-12));
}

TEST_CASE("uniform and atomic tails, quantiles and cdf integral") {
  ValueDist U = ValueDist::uniform(1.0, 3.0);
  CHECK(U.mean() == Catch::Approx(2.0));
  CHECK(U.tail(2.5) == Catch::Approx(0.25));
  CHECK(U.tail_stats(2.0).cond_mean == Catch::Approx(2.5));
  CHECK(U.quantile(0.25) == Catch::Approx(1.5));
  // cdf integral against a midpoint rule.
  double numeric = 0.0;
  int n = 20000;
  for (int j = 0; j < n; ++j) numeric += U.cdf(0.5 + 3.0 * (j + 0.5) / n) * 3.0 / n;
  CHECK(U.cdf_integral(0.5, 3.5) == Catch::Approx(numeric).margin(1e-6));

  ValueDist A = ValueDist::atomic({1.0, 2.0, 5.0}, {0.2, 0.5, 0.3});
  CHECK(A.cdf(2.0) == Catch::Approx(0.7));
  CHECK(A.cdf_left(2.0) == Catch::Approx(0.2));
  CHECK(A.tail(2.0) == Catch::Approx(0.8));
  CHECK(A.tail_stats(2.0).cond_mean == Catch::Approx((2.0 * 0.5 + 5.0 * 0.3) / 0.8));
  CHECK(A.quantile(0.1) == 1.0);
  CHECK(A.quantile(0.5) == 2.0);
  CHECK(A.quantile(0.95) == 5.0);
  double num = 0.0;
  for (int j = 0; j < n; ++j) num += A.cdf(0.0 + 6.0 * (j + 0.5) / n) * 6.0 / n;
  CHECK(A.cdf_integral(0.0, 6.0) == Catch::Approx(num).margin(1e-3));
  CHECK_THROWS_AS(A.tail_stats(6.0), ZeroTailError);

  ValueDist D = ValueDist::degenerate(4.0);
  CHECK(D.mean() == 4.0);
  CHECK(D.quantile(0.99) == 4.0);
}

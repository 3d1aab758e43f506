#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "prophet/distributions.hpp"
#include "prophet/hardness.hpp"
#include "prophet/policies.hpp"
#include "prophet/rng.hpp"

namespace prophet {

// Substream layout per (seed, run): values, acceptance coins, rank
// tie-breaks, horizon draw. Coins and ties are drawn lazily from their own
// streams so the value stream is identical across policies.
inline constexpr std::uint64_t kStreamValues = 0;
inline constexpr std::uint64_t kStreamCoins = 1;
inline constexpr std::uint64_t kStreamTies = 2;
inline constexpr std::uint64_t kStreamHorizon = 3;

struct SimReport {
  double estimate = 0.0;
  double se = 0.0;
  std::int64_t runs = 0;
  std::uint64_t seed = 0;
  std::string policy_tag;
  bool paired = false;
  double prophet_estimate = 0.0;
  double prophet_se = 0.0;
  double ratio = 0.0;
  double ratio_se = 0.0;  // paired-delta method
};

namespace detail {

struct PairMoments {
  Kahan sum_g, sum_g2, sum_p, sum_p2, sum_gp;
  std::int64_t n = 0;

  void add(double g, double p) {
    sum_g.add(g);
    sum_g2.add(g * g);
    sum_p.add(p);
    sum_p2.add(p * p);
    sum_gp.add(g * p);
    ++n;
  }

  void fill(SimReport& rep, bool paired) const {
    double nd = static_cast<double>(n);
    double mg = sum_g.sum() / nd;
    double vg = std::max(0.0, sum_g2.sum() / nd - mg * mg);
    rep.estimate = mg;
    rep.se = std::sqrt(vg / nd);
    rep.runs = n;
    if (!paired) return;
    rep.paired = true;
    double mp = sum_p.sum() / nd;
    double vp = std::max(0.0, sum_p2.sum() / nd - mp * mp);
    double cov = sum_gp.sum() / nd - mg * mp;
    rep.prophet_estimate = mp;
    rep.prophet_se = std::sqrt(vp / nd);
    if (mp > 0.0) {
      rep.ratio = mg / mp;
      double var_ratio =
          (vg - 2.0 * rep.ratio * cov + rep.ratio * rep.ratio * vp) / (mp * mp * nd);
      rep.ratio_se = std::sqrt(std::max(0.0, var_ratio));
    }
  }
};

// One run of the gambler's game under `policy`, alongside the prophet's max
// on the same value stream (common random numbers).
inline void play_run(const HorizonDist& H, const ValueDist& X, const Policy& policy,
                     std::uint64_t seed, std::uint64_t run, double& gambler, double& prophet) {
  RunRng values(seed, run, kStreamValues);
  RunRng coins(seed, run, kStreamCoins);
  RunRng ties(seed, run, kStreamTies);
  RunRng hz(seed, run, kStreamHorizon);
  std::int64_t h = H.sample(hz.next_double());
  const bool wants_coin = std::holds_alternative<RandomizedThreshold>(policy.variant());
  const bool wants_tie = std::holds_alternative<SecretaryRule>(policy.variant());
  RunState st;
  gambler = 0.0;
  prophet = 0.0;
  bool stopped = false;
  for (std::int64_t i = 1; i <= h; ++i) {
    double x = X.quantile(values.next_double());
    if (x > prophet) prophet = x;
    if (!stopped) {
      double tie = wants_tie ? ties.next_double() : 0.0;
      double coin = wants_coin ? coins.next_double() : 0.0;
      if (policy.step(i, x, tie, coin, st)) {
        gambler = x;
        stopped = true;
      }
    }
  }
}

}  // namespace detail

inline SimReport simulate_pair(const HorizonDist& H, const ValueDist& X, const Policy& policy,
                               std::int64_t runs, std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("simulate: runs must be >= 1");
  detail::PairMoments mom;
  for (std::int64_t r = 0; r < runs; ++r) {
    double g, p;
    detail::play_run(H, X, policy, seed, static_cast<std::uint64_t>(r), g, p);
    mom.add(g, p);
  }
  SimReport rep;
  rep.seed = seed;
  rep.policy_tag = policy.tag();
  mom.fill(rep, true);
  return rep;
}

inline SimReport simulate_policy(const HorizonDist& H, const ValueDist& X, const Policy& policy,
                                 std::int64_t runs, std::uint64_t seed) {
  SimReport rep = simulate_pair(H, X, policy, runs, seed);
  rep.paired = false;
  rep.prophet_estimate = rep.prophet_se = rep.ratio = rep.ratio_se = 0.0;
  return rep;
}

inline SimReport simulate_prophet(const HorizonDist& H, const ValueDist& X, std::int64_t runs,
                                  std::uint64_t seed) {
  SimReport rep = simulate_pair(H, X, Policy(FixedThreshold{0.0}), runs, seed);
  SimReport out;
  out.estimate = rep.prophet_estimate;
  out.se = rep.prophet_se;
  out.runs = rep.runs;
  out.seed = seed;
  out.policy_tag = "prophet";
  return out;
}

struct SecretaryReport {
  SimReport mc;
  double exact = 0.0;  // ((r-1)/m) sum_{i=r}^m 1/(i-1); 1/m at r = 1
};

// Classical m-candidate secretary rule with waiting index r; value-oblivious,
// so ranks are simulated directly as raw 64-bit draws.
inline SecretaryReport secretary_win_prob(std::int64_t m, std::int64_t r, std::int64_t runs,
                                          std::uint64_t seed) {
  if (m < 1 || r < 1 || r > m) throw std::invalid_argument("secretary: need 1 <= r <= m");
  if (runs < 1) throw std::invalid_argument("secretary: runs must be >= 1");
  SecretaryReport rep;
  if (r == 1) {
    rep.exact = 1.0 / static_cast<double>(m);
  } else {
    detail::Kahan acc;
    for (std::int64_t i = r; i <= m; ++i) acc.add(1.0 / static_cast<double>(i - 1));
    rep.exact = (static_cast<double>(r - 1) / static_cast<double>(m)) * acc.sum();
  }
  std::int64_t wins = 0;
  for (std::int64_t run = 0; run < runs; ++run) {
    RunRng rng(seed, static_cast<std::uint64_t>(run), kStreamValues);
    std::uint64_t best = 0;
    std::uint64_t accepted = 0;
    bool has_accepted = false;
    bool beaten = false;
    for (std::int64_t i = 1; i <= m; ++i) {
      std::uint64_t u = rng.next_u64();
      if (!has_accepted) {
        if (i >= r && u > best) {
          accepted = u;
          has_accepted = true;
        }
        if (u > best) best = u;
      } else if (u > accepted) {
        beaten = true;
        break;
      }
    }
    if (has_accepted && !beaten) ++wins;
  }
  double p = static_cast<double>(wins) / static_cast<double>(runs);
  rep.mc.estimate = p;
  rep.mc.se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  rep.mc.runs = runs;
  rep.mc.seed = seed;
  rep.mc.policy_tag = "secretary";
  return rep;
}

// Secretary rule on a hard-family point: wait r_m - 1 candidates (r_m from
// the cap m), then accept the first strict record; payoff 0 if the horizon
// arrives first. Reported against the paired prophet max.
inline SimReport simulate_sp_on_family(const HardFamilyPoint& pt, std::int64_t runs,
                                       std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("simulate: runs must be >= 1");
  std::int64_t r = secretary_waiting_index(pt.m);
  detail::PairMoments mom;
  for (std::int64_t run = 0; run < runs; ++run) {
    RunRng values(seed, static_cast<std::uint64_t>(run), kStreamValues);
    RunRng hz(seed, static_cast<std::uint64_t>(run), kStreamHorizon);
    std::int64_t h = pt.horizon.sample(hz.next_double());
    double gambler = 0.0, prophet = 0.0, best = 0.0;
    bool stopped = false;
    for (std::int64_t i = 1; i <= h; ++i) {
      double x = pt.value.quantile(values.next_double());
      if (x > prophet) prophet = x;
      if (!stopped && x > best) {
        if (i >= r) {
          gambler = x;
          stopped = true;
        }
        best = x;
      }
    }
    mom.add(gambler, prophet);
  }
  SimReport rep;
  rep.seed = seed;
  rep.policy_tag = "sp-on-family";
  mom.fill(rep, true);
  return rep;
}

}  // namespace prophet

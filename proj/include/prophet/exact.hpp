#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "prophet/distributions.hpp"
#include "prophet/policies.hpp"

namespace prophet {

struct EvalReport {
  double gambler = 0.0;
  double prophet = 0.0;
  double ratio = 0.0;
  std::string method = "closed-form";
  double err = 0.0;          // numeric-error estimate (truncation etc.)
  bool never_stops = false;  // zero tail above the threshold: payoff 0 by convention
};

// Continuation values and induced thresholds of the discounted problem
// Z_i = S(i) X_i; accept at step i iff x_i >= thresholds[i-1].
struct DiscountedPolicy {
  std::int64_t m = 0;
  std::vector<double> cont;        // cont[i-1] = v_{i+1}, the value of continuing past step i
  std::vector<double> thresholds;  // thresholds[i-1] = v_{i+1} / S(i)
  double value = 0.0;              // V_0 = v_1
};

// E[max_{i<=n} X_i] for n iid Pareto(1+eps) draws: n * Beta(n, eps/(1+eps)).
inline double pareto_prophet_mean(std::int64_t n, double eps) {
  if (n < 1) throw std::invalid_argument("pareto_prophet_mean: n must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("pareto_prophet_mean: eps must be > 0");
  double a = static_cast<double>(n);
  double b = eps / (1.0 + eps);
  return std::exp(std::log(a) + std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// E[max_{i<=h} X_i] for h iid draws of X.
inline double expected_max(const ValueDist& X, std::int64_t h) {
  if (h < 1) throw std::invalid_argument("expected_max: h must be >= 1");
  double n = static_cast<double>(h);
  switch (X.kind()) {
    case ValueDist::Kind::Pareto:
      return pareto_prophet_mean(h, X.epsilon());
    case ValueDist::Kind::Uniform:
      return X.uniform_lo() + (X.uniform_hi() - X.uniform_lo()) * n / (n + 1.0);
    default: {
      // sum_k x_k (V(x_k)^h - V(x_k^-)^h)
      detail::Kahan acc;
      double lo = 0.0;  // V(x_k^-)^h, carried forward
      for (std::size_t k = 0; k < X.atoms().size(); ++k) {
        double hi = std::pow(X.cdf(X.atoms()[k]), n);
        acc.add(X.atoms()[k] * (hi - lo));
        lo = hi;
      }
      return acc.sum();
    }
  }
}

// E[M_H] = sum_h pmf(h) E[M_h]; geometric horizons are truncated at tail 1e-12.
inline double prophet_value(const HorizonDist& H, const ValueDist& X) {
  if (!H.is_finite()) {
    HorizonDist T = H.truncated(1e-12);
    return prophet_value(T, X);
  }
  detail::Kahan acc;
  for (std::size_t i = 0; i < H.support().size(); ++i)
    acc.add(H.pmf()[i] * expected_max(X, H.support()[i]));
  return acc.sum();
}

// E X_{tau_{pi,q}} = c_{pi,q} E(X | X >= pi), c_{pi,q} = 1 - pgf_H(1 - q P(X >= pi)).
inline EvalReport randomized_threshold_value(const HorizonDist& H, const ValueDist& X, double pi,
                                             double q) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("randomized_threshold_value: q must be in (0,1]");
  EvalReport rep;
  rep.prophet = prophet_value(H, X);
  double t = X.tail(pi);
  if (t <= 0.0) {
    rep.never_stops = true;
    rep.gambler = 0.0;
  } else {
    double c = 1.0 - H.pgf(1.0 - q * t);
    rep.gambler = c * X.tail_stats(pi).cond_mean;
  }
  rep.ratio = rep.prophet > 0.0 ? rep.gambler / rep.prophet : 0.0;
  if (!H.is_finite()) rep.err = 1e-12 * X.mean();
  return rep;
}

inline EvalReport threshold_value(const HorizonDist& H, const ValueDist& X, double pi) {
  return randomized_threshold_value(H, X, pi, 1.0);
}

// Exact value of the ex-ante rule at threshold p with mu = E H: accept any
// x > p outright and randomize only on the atom at p so the per-step
// acceptance probability is exactly 1/mu. This differs from
// randomized_threshold_value(H, X, p, q): flipping the coin on the whole
// upper set keeps the acceptance probability at 1/mu but drags the accepted
// value's conditional mean down to E(X | X >= p), which can fall below the
// prophet when the atom at p is heavy -- the 2 - 1/mu certificate then
// fails even on pgf-certified horizons. Randomizing only the tie yields the
// top-1/mu-quantile conditional mean, which the ex-ante relaxation bounds
// from below by the prophet. For continuous X the two rules coincide.
inline EvalReport ex_ante_value(const HorizonDist& H, const ValueDist& X, double p, double mu) {
  if (!(mu >= 1.0)) throw std::invalid_argument("ex_ante_value: mu must be >= 1");
  EvalReport rep;
  rep.prophet = prophet_value(H, X);
  double tail_ge = X.tail(p);           // P(X >= p)
  double tail_gt = 1.0 - X.cdf(p);      // P(X > p)
  if (tail_ge <= 0.0) {
    rep.never_stops = true;
    rep.gambler = 0.0;
  } else {
    // Everything strictly above p is accepted; the atom at p only as far as
    // needed to reach acceptance probability 1/mu (never rejecting above p).
    double take = std::clamp(1.0 / mu, tail_gt, tail_ge);
    double upper = X.tail_stats(p).cond_mean * tail_ge - p * (tail_ge - tail_gt);
    double accepted_mean = (upper + p * (take - tail_gt)) / take;
    double c = 1.0 - H.pgf(1.0 - take);
    rep.gambler = c * accepted_mean;
  }
  rep.ratio = rep.prophet > 0.0 ? rep.gambler / rep.prophet : 0.0;
  if (!H.is_finite()) rep.err = 1e-12 * X.mean();
  return rep;
}

namespace detail {

// E[max(c X, v)] in closed form, c > 0, v >= 0.
inline double expected_max_scaled(const ValueDist& X, double c, double v) {
  switch (X.kind()) {
    case ValueDist::Kind::Pareto: {
      double eps = X.epsilon();
      if (v <= c) return c * (1.0 + eps) / eps;
      double t = v / c;
      double tail = std::pow(t, -(1.0 + eps));
      return v * (1.0 - tail) + c * (1.0 + 1.0 / eps) * std::pow(t, -eps);
    }
    case ValueDist::Kind::Uniform: {
      double A = c * X.uniform_lo(), B = c * X.uniform_hi();
      if (v <= A) return 0.5 * (A + B);
      if (v >= B) return v;
      return (v * (v - A) + 0.5 * (B * B - v * v)) / (B - A);
    }
    default: {
      Kahan acc;
      for (std::size_t k = 0; k < X.atoms().size(); ++k)
        acc.add(X.probs()[k] * std::max(c * X.atoms()[k], v));
      return acc.sum();
    }
  }
}

}  // namespace detail

// Backward induction on the discounted problem: v_{m+1} = 0,
// v_i = E[max(S(i) X, v_{i+1})]; V_0 = v_1 is the optimal random-horizon value.
inline DiscountedPolicy backward_induction(const HorizonDist& H, const ValueDist& X) {
  if (!H.is_finite())
    throw std::invalid_argument(
        "backward_induction: infinite horizon support; truncate first (truncated(1e-12))");
  std::int64_t m = H.max_support();
  DiscountedPolicy dp;
  dp.m = m;
  dp.cont.assign(static_cast<std::size_t>(m), 0.0);
  dp.thresholds.assign(static_cast<std::size_t>(m), 0.0);
  double v_next = 0.0;  // v_{i+1}
  for (std::int64_t i = m; i >= 1; --i) {
    double s = H.survival(i);
    dp.cont[static_cast<std::size_t>(i - 1)] = v_next;
    dp.thresholds[static_cast<std::size_t>(i - 1)] = s > 0.0 ? v_next / s : 0.0;
    v_next = detail::expected_max_scaled(X, s, v_next);
  }
  dp.value = v_next;
  return dp;
}

// Gambler value of the backward-induction rule under H (equals dp.value, but
// packaged with the prophet value for reporting).
inline EvalReport backward_induction_value(const HorizonDist& H, const ValueDist& X) {
  EvalReport rep;
  rep.method = "recursion";
  if (H.is_finite()) {
    rep.gambler = backward_induction(H, X).value;
  } else {
    rep.gambler = backward_induction(H.truncated(1e-12), X).value;
    rep.err = 1e-12 * H.mean() * X.mean();
  }
  rep.prophet = prophet_value(H, X);
  rep.ratio = rep.prophet > 0.0 ? rep.gambler / rep.prophet : 0.0;
  return rep;
}

// Optimal value under a geometric horizon with failure probability q and
// bounded X on [a,b]: least root of f(V) := V + integral_{qV}^{b} F(x) dx = b.
// The single-threshold rule at V_0 is optimal and earns V_0.
inline double geometric_fixed_point(double q, const ValueDist& X) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("geometric_fixed_point: q must be in (0,1)");
  if (!X.is_bounded()) throw std::invalid_argument("geometric_fixed_point: unbounded values");
  double b = X.max_support();
  auto f = [&](double v) { return v + X.cdf_integral(q * v, b) - b; };
  double lo = 0.0, hi = b;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * (1.0 + b)) break;
  }
  return 0.5 * (lo + hi);
}

// The two-point worst case under a geometric horizon, coupled so that the
// gambler is indifferent between the atoms: x1 = q p x2 / (1 - q(1-p)).
struct TightInstance {
  double q, p;
  double x1, x2 = 1.0;
  double optimal_value;  // V_0 = p x2 / (1 - q(1-p))
  double ratio;          // E X_tau / E M_H at this coupling
  double limit;          // p -> 0 limit, 1/(1+q)
};

inline TightInstance tight_instance_ratio(double q, double p) {
  if (!(q > 0.0 && q < 1.0) || !(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("tight_instance_ratio: need p, q in (0,1)");
  TightInstance t;
  t.q = q;
  t.p = p;
  double denom = 1.0 - q * (1.0 - p);
  t.x1 = q * p * t.x2 / denom;
  t.optimal_value = p * t.x2 / denom;
  t.ratio = 1.0 / ((1.0 - p) * (1.0 - q) * q / denom + 1.0);
  t.limit = 1.0 / (1.0 + q);
  return t;
}

// Exhaustive oracle for tiny instances: enumerate every per-step-threshold
// rule (an upper acceptance set of atoms at each step — among deterministic
// history-dependent rules, one of this form is optimal because the values are
// iid) and evaluate it directly in the original random-horizon game, reward
// x at step i with probability S(i) x the gambler reaches i unstopped. This
// never touches the discounted recursion, so agreement with
// backward_induction exercises the reduction itself.
inline double brute_force_optimal(const HorizonDist& H, const ValueDist& X) {
  if (!H.is_finite() || H.support().size() > 4)
    throw std::invalid_argument("brute_force_optimal: |supp H| must be <= 4");
  if (!X.is_atomic() || X.atoms().size() > 4)
    throw std::invalid_argument("brute_force_optimal: X must be atomic with <= 4 atoms");
  std::int64_t m = H.max_support();
  if (m > 6) throw std::invalid_argument("brute_force_optimal: m must be <= 6");

  std::size_t na = X.atoms().size();
  // For acceptance set {atoms >= atom[j]}: probability and partial mean.
  // Index na means "accept nothing".
  std::vector<double> acc_prob(na + 1, 0.0), acc_mean(na + 1, 0.0);
  for (std::size_t j = na; j-- > 0;) {
    acc_prob[j] = acc_prob[j + 1] + X.probs()[j];
    acc_mean[j] = acc_mean[j + 1] + X.probs()[j] * X.atoms()[j];
  }

  std::vector<double> surv(static_cast<std::size_t>(m));
  for (std::int64_t i = 1; i <= m; ++i) surv[static_cast<std::size_t>(i - 1)] = H.survival(i);

  std::size_t total = 1;
  for (std::int64_t i = 0; i < m; ++i) total *= na + 1;

  double best = 0.0;
  std::vector<std::size_t> cut(static_cast<std::size_t>(m));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::int64_t i = 0; i < m; ++i) {
      cut[static_cast<std::size_t>(i)] = c % (na + 1);
      c /= na + 1;
    }
    double reach = 1.0;  // P(rule has not stopped before step i)
    double value = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      std::size_t j = cut[static_cast<std::size_t>(i)];
      value += reach * surv[static_cast<std::size_t>(i)] * acc_mean[j];
      reach *= 1.0 - acc_prob[j];
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace prophet

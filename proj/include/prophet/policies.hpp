#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "prophet/distributions.hpp"

namespace prophet {

// Accept the first value >= pi.
struct FixedThreshold {
  double pi;
};

// Accept a value >= pi with probability q (an independent coin per candidate).
struct RandomizedThreshold {
  double pi;
  double q;
};

// Accept at step i iff x_i >= thresholds[i-1]; accept everything beyond the
// listed steps (continuation value is zero there).
struct StepThresholds {
  std::vector<double> thresholds;
};

// Reject the first r-1 values, then accept the first strict relative maximum.
// Ties are broken by per-value auxiliary uniforms, compared lexicographically.
struct SecretaryRule {
  std::int64_t r;
};

// Per-run mutable state; policies themselves stay immutable and shareable.
struct RunState {
  double best = -1.0;
  double best_tie = -1.0;
  bool seen_any = false;
};

class Policy {
 public:
  using Variant = std::variant<FixedThreshold, RandomizedThreshold, StepThresholds, SecretaryRule>;

  explicit Policy(Variant v) : v_(std::move(v)) {}

  const Variant& variant() const { return v_; }

  // Pure decision at step i (1-based). aux_tie breaks ranking ties, aux_coin
  // drives threshold randomization; both come from run-local streams so that
  // identical seeds give identical traces.
  bool step(std::int64_t i, double x, double aux_tie, double aux_coin, RunState& st) const {
    bool accept = false;
    if (const auto* f = std::get_if<FixedThreshold>(&v_)) {
      accept = x >= f->pi;
    } else if (const auto* r = std::get_if<RandomizedThreshold>(&v_)) {
      accept = x >= r->pi && aux_coin < r->q;
    } else if (const auto* s = std::get_if<StepThresholds>(&v_)) {
      double thr = static_cast<std::size_t>(i) <= s->thresholds.size()
                       ? s->thresholds[static_cast<std::size_t>(i - 1)]
                       : 0.0;
      accept = x >= thr;
    } else if (const auto* sec = std::get_if<SecretaryRule>(&v_)) {
      bool record = !st.seen_any || x > st.best || (x == st.best && aux_tie > st.best_tie);
      accept = record && i >= sec->r;
      if (record) {
        st.best = x;
        st.best_tie = aux_tie;
      }
      st.seen_any = true;
    }
    return accept;
  }

  const char* tag() const {
    if (std::holds_alternative<FixedThreshold>(v_)) return "threshold";
    if (std::holds_alternative<RandomizedThreshold>(v_)) return "randomized";
    if (std::holds_alternative<StepThresholds>(v_)) return "step_thresholds";
    return "secretary";
  }

 private:
  Variant v_;
};

struct ExAnteThreshold {
  double p;  // threshold
  double q;  // acceptance probability at/above p
};

// Threshold p with q * P(X >= p) = 1/mu: p solves P(X >= p) = 1/mu for
// continuous X; at an atom whose jump straddles 1/mu, q compensates.
inline ExAnteThreshold select_ex_ante_threshold(const ValueDist& X, double mu) {
  if (!(mu >= 1.0)) throw std::invalid_argument("select_ex_ante_threshold: mu must be >= 1");
  double target = 1.0 / mu;
  if (X.is_continuous()) {
    double p;
    if (X.kind() == ValueDist::Kind::Pareto) {
      // tail(p) = p^-(1+eps) = 1/mu
      p = std::pow(mu, 1.0 / (1.0 + X.epsilon()));
    } else {
      // tail(p) = (b - p)/(b - a) = 1/mu
      p = X.max_support() - target * (X.max_support() - X.min_support());
    }
    return {p, 1.0};
  }
  // Walk atoms from the top: find p with P(X >= p) >= 1/mu >= P(X > p).
  const auto& atoms = X.atoms();
  for (std::size_t i = atoms.size(); i-- > 0;) {
    double p = atoms[i];
    double tail_at = X.tail(p);          // P(X >= p)
    double tail_above = 1.0 - X.cdf(p);  // P(X > p)
    if (tail_at >= target - kProbTol && target >= tail_above - kProbTol) {
      if (std::abs(tail_at - target) <= kProbTol) return {p, 1.0};  // hit exactly
      return {p, 1.0 / (mu * tail_at)};
    }
  }
  return {atoms.front(), 1.0 / (mu * 1.0)};
}

// Exact optimal waiting index for the classical secretary rule on m values:
// the smallest r with sum_{k=r}^{m-1} 1/k <= 1.
inline std::int64_t secretary_waiting_index(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("secretary_waiting_index: m must be >= 1");
  double tail = 0.0;
  std::int64_t r = m;
  for (std::int64_t k = m - 1; k >= 1; --k) {
    if (tail + 1.0 / static_cast<double>(k) > 1.0) break;
    tail += 1.0 / static_cast<double>(k);
    r = k;
  }
  return r;
}

// Asymptotic guarantee of the random-horizon secretary rule on the hard
// family: g(eps) = (1/e)(1 - (1 + 1/(2 eps))(1 - e^{-2 eps/(1+2 eps)})).
inline double sp_guarantee(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sp_guarantee: eps must be > 0");
  double t = 2.0 * eps / (1.0 + 2.0 * eps);
  return (1.0 / std::exp(1.0)) * (1.0 - (-std::expm1(-t)) / t);
}

}  // namespace prophet

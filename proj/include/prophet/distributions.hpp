#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prophet {

inline constexpr double kProbTol = 1e-12;

// Thrown when a conditional mean is requested above a zero-probability tail.
struct ZeroTailError : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {

// Kahan-compensated accumulator.
class Kahan {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double sum() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Stable (1-s)^h for s in [0,1].
inline double one_minus_pow(double s, double h) {
  if (s >= 1.0) return 0.0;
  return std::exp(h * std::log1p(-s));
}

}  // namespace detail

// A positive-integer-supported horizon law. Immutable after construction.
class HorizonDist {
 public:
  enum class Kind { FiniteTable, Geometric };

  static HorizonDist finite(std::vector<std::int64_t> support, std::vector<double> pmf,
                            bool renormalize = false) {
    if (support.empty() || support.size() != pmf.size())
      throw std::invalid_argument("horizon: support/pmf size mismatch");
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] < 1) throw std::invalid_argument("horizon: support must be >= 1");
      if (i > 0 && support[i] <= support[i - 1])
        throw std::invalid_argument("horizon: support must be strictly increasing");
      if (pmf[i] < 0.0) throw std::invalid_argument("horizon: negative pmf entry");
    }
    detail::Kahan total;
    for (double p : pmf) total.add(p);
    double sum = total.sum();
    if (renormalize) {
      if (sum <= 0.0) throw std::invalid_argument("horizon: pmf sums to zero");
      for (double& p : pmf) p /= sum;
    } else if (std::abs(sum - 1.0) > kProbTol) {
      throw std::invalid_argument("horizon: pmf sums to " + std::to_string(sum) +
                                  ", outside tolerance");
    }
    return HorizonDist(std::move(support), std::move(pmf));
  }

  static HorizonDist geometric(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("horizon: geometric q must be in (0,1)");
    return HorizonDist(q);
  }

  static HorizonDist degenerate(std::int64_t m) { return finite({m}, {1.0}); }

  // Zipf on [n] with shape a: pmf(h) = h^{-a} / Z.
  static HorizonDist zipf(std::int64_t n, double a) {
    if (n < 1) throw std::invalid_argument("horizon: zipf n must be >= 1");
    std::vector<std::int64_t> sup(static_cast<std::size_t>(n));
    std::vector<double> pmf(static_cast<std::size_t>(n));
    detail::Kahan z;
    for (std::int64_t h = 1; h <= n; ++h) {
      double w = std::pow(static_cast<double>(h), -a);
      sup[static_cast<std::size_t>(h - 1)] = h;
      pmf[static_cast<std::size_t>(h - 1)] = w;
      z.add(w);
    }
    for (double& p : pmf) p /= z.sum();
    return HorizonDist(std::move(sup), std::move(pmf));
  }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::FiniteTable; }
  double q() const { return q_; }
  const std::vector<std::int64_t>& support() const { return support_; }
  const std::vector<double>& pmf() const { return pmf_; }

  // sup supp(H); only valid for finite tables.
  std::int64_t max_support() const {
    if (!is_finite()) throw std::logic_error("horizon: infinite support");
    return support_.back();
  }
  std::int64_t min_support() const { return is_finite() ? support_.front() : 1; }

  double mean() const { return mean_; }
  double variance() const { return var_; }

  double pmf_at(std::int64_t h) const {
    if (h < 1) return 0.0;
    if (kind_ == Kind::Geometric) return (1.0 - q_) * std::pow(q_, static_cast<double>(h - 1));
    auto it = std::lower_bound(support_.begin(), support_.end(), h);
    if (it == support_.end() || *it != h) return 0.0;
    return pmf_[static_cast<std::size_t>(it - support_.begin())];
  }

  // S(h) = P(H >= h).
  double survival(std::int64_t h) const {
    if (h <= 1) return 1.0;
    if (kind_ == Kind::Geometric) return std::pow(q_, static_cast<double>(h - 1));
    auto it = std::lower_bound(support_.begin(), support_.end(), h);
    if (it == support_.end()) return 0.0;
    return surv_[static_cast<std::size_t>(it - support_.begin())];
  }

  // lambda(h) = P(H = h) / S(h); 1 beyond the top of a finite support.
  double hazard(std::int64_t h) const {
    if (h < 1) throw std::invalid_argument("hazard: h must be >= 1");
    if (kind_ == Kind::Geometric) return 1.0 - q_;
    if (h > support_.back()) return 1.0;
    double s = survival(h);
    return pmf_at(h) / s;
  }

  // E[t^H] for t in [0,1].
  double pgf(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("pgf: t must be in [0,1]");
    if (kind_ == Kind::Geometric) return ((1.0 - q_) * t) / (1.0 - q_ * t);
    detail::Kahan acc;
    for (std::size_t i = 0; i < support_.size(); ++i)
      acc.add(pmf_[i] * std::pow(t, static_cast<double>(support_[i])));
    return acc.sum();
  }

  // E[H^n].
  double moment(int n) const {
    if (n < 1) throw std::invalid_argument("moment: n must be >= 1");
    if (kind_ == Kind::Geometric) {
      if (n == 1) return 1.0 / (1.0 - q_);
      if (n == 2) return (1.0 + q_) / ((1.0 - q_) * (1.0 - q_));
      return truncated(1e-12).moment(n);
    }
    detail::Kahan acc;
    for (std::size_t i = 0; i < support_.size(); ++i)
      acc.add(pmf_[i] * std::pow(static_cast<double>(support_[i]), static_cast<double>(n)));
    double v = acc.sum();
    if (!std::isfinite(v)) throw std::overflow_error("moment: sum overflow");
    return v;
  }

  // Finite-table approximation of a geometric horizon: all mass beyond the
  // truncation point is collapsed onto the last support point.
  HorizonDist truncated(double tail_mass) const {
    if (kind_ == Kind::FiniteTable) return *this;
    if (!(tail_mass > 0.0)) throw std::invalid_argument("truncated: tail mass must be > 0");
    std::int64_t n = static_cast<std::int64_t>(std::ceil(std::log(tail_mass) / std::log(q_)));
    n = std::max<std::int64_t>(n, 1);
    std::vector<std::int64_t> sup(static_cast<std::size_t>(n));
    std::vector<double> pmf(static_cast<std::size_t>(n));
    for (std::int64_t h = 1; h < n; ++h) {
      sup[static_cast<std::size_t>(h - 1)] = h;
      pmf[static_cast<std::size_t>(h - 1)] = (1.0 - q_) * std::pow(q_, static_cast<double>(h - 1));
    }
    sup.back() = n;
    pmf.back() = std::pow(q_, static_cast<double>(n - 1));  // S(n)
    return finite(std::move(sup), std::move(pmf));
  }

  // Inverse-cdf sample from a uniform u in [0,1).
  std::int64_t sample(double u) const {
    if (kind_ == Kind::Geometric) {
      double h = std::floor(std::log1p(-u) / std::log(q_)) + 1.0;
      return h < 1.0 ? 1 : static_cast<std::int64_t>(h);
    }
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t idx = std::min(static_cast<std::size_t>(it - cum_.begin()), support_.size() - 1);
    return support_[idx];
  }

 private:
  explicit HorizonDist(double q) : kind_(Kind::Geometric), q_(q) {
    mean_ = 1.0 / (1.0 - q);
    var_ = q / ((1.0 - q) * (1.0 - q));
  }

  HorizonDist(std::vector<std::int64_t> support, std::vector<double> pmf)
      : kind_(Kind::FiniteTable), support_(std::move(support)), pmf_(std::move(pmf)) {
    std::size_t n = support_.size();
    surv_.resize(n);
    cum_.resize(n);
    double tail = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      tail += pmf_[i];
      surv_[i] = tail;
    }
    detail::Kahan m1, m2, c;
    for (std::size_t i = 0; i < n; ++i) {
      double h = static_cast<double>(support_[i]);
      m1.add(pmf_[i] * h);
      m2.add(pmf_[i] * h * h);
      c.add(pmf_[i]);
      cum_[i] = c.sum();
    }
    mean_ = m1.sum();
    var_ = m2.sum() - mean_ * mean_;
    if (var_ < 0.0) var_ = 0.0;
  }

  Kind kind_;
  double q_ = 0.0;
  std::vector<std::int64_t> support_;
  std::vector<double> pmf_;
  std::vector<double> surv_;  // surv_[i] = P(H >= support_[i])
  std::vector<double> cum_;
  double mean_ = 0.0;
  double var_ = 0.0;
};

struct TailStats {
  double tail;       // P(X >= pi)
  double cond_mean;  // E(X | X >= pi)
};

// A nonnegative value law. Immutable after construction.
class ValueDist {
 public:
  enum class Kind { Atomic, TwoPoint, Pareto, Uniform };

  static ValueDist atomic(std::vector<double> atoms, std::vector<double> probs,
                          bool renormalize = false) {
    if (atoms.empty() || atoms.size() != probs.size())
      throw std::invalid_argument("value: atoms/probs size mismatch");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i] < 0.0) throw std::invalid_argument("value: atoms must be nonnegative");
      if (i > 0 && atoms[i] <= atoms[i - 1])
        throw std::invalid_argument("value: atoms must be strictly increasing");
      if (probs[i] < 0.0) throw std::invalid_argument("value: negative probability");
    }
    detail::Kahan total;
    for (double p : probs) total.add(p);
    if (renormalize) {
      if (total.sum() <= 0.0) throw std::invalid_argument("value: probs sum to zero");
      for (double& p : probs) p /= total.sum();
    } else if (std::abs(total.sum() - 1.0) > kProbTol) {
      throw std::invalid_argument("value: probs sum outside tolerance");
    }
    ValueDist v(Kind::Atomic);
    v.atoms_ = std::move(atoms);
    v.probs_ = std::move(probs);
    return v;
  }

  static ValueDist two_point(double x1, double x2, double p) {
    if (!(x1 >= 0.0 && x1 < x2)) throw std::invalid_argument("value: need 0 <= x1 < x2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("value: p must be in (0,1)");
    ValueDist v(Kind::TwoPoint);
    v.atoms_ = {x1, x2};
    v.probs_ = {1.0 - p, p};
    return v;
  }

  // Pareto Type I with scale 1 and shape 1 + epsilon.
  static ValueDist pareto(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("value: pareto epsilon must be > 0");
    ValueDist v(Kind::Pareto);
    v.eps_ = epsilon;
    return v;
  }

  static ValueDist uniform(double a, double b) {
    if (!(a >= 0.0 && a < b)) throw std::invalid_argument("value: need 0 <= a < b");
    ValueDist v(Kind::Uniform);
    v.a_ = a;
    v.b_ = b;
    return v;
  }

  static ValueDist degenerate(double c) {
    if (c < 0.0) throw std::invalid_argument("value: degenerate atom must be nonnegative");
    ValueDist v(Kind::Atomic);
    v.atoms_ = {c};
    v.probs_ = {1.0};
    return v;
  }

  Kind kind() const { return kind_; }
  double epsilon() const { return eps_; }
  double uniform_lo() const { return a_; }
  double uniform_hi() const { return b_; }
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& probs() const { return probs_; }

  bool is_atomic() const { return kind_ == Kind::Atomic || kind_ == Kind::TwoPoint; }
  bool is_continuous() const { return !is_atomic(); }
  bool is_bounded() const { return kind_ != Kind::Pareto; }

  double min_support() const {
    switch (kind_) {
      case Kind::Pareto: return 1.0;
      case Kind::Uniform: return a_;
      default: return atoms_.front();
    }
  }
  double max_support() const {
    switch (kind_) {
      case Kind::Pareto: return std::numeric_limits<double>::infinity();
      case Kind::Uniform: return b_;
      default: return atoms_.back();
    }
  }

  double mean() const {
    switch (kind_) {
      case Kind::Pareto: return (1.0 + eps_) / eps_;
      case Kind::Uniform: return 0.5 * (a_ + b_);
      default: {
        detail::Kahan acc;
        for (std::size_t i = 0; i < atoms_.size(); ++i) acc.add(atoms_[i] * probs_[i]);
        return acc.sum();
      }
    }
  }

  // V(x) = P(X <= x).
  double cdf(double x) const {
    switch (kind_) {
      case Kind::Pareto: return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -(1.0 + eps_));
      case Kind::Uniform: return x <= a_ ? 0.0 : (x >= b_ ? 1.0 : (x - a_) / (b_ - a_));
      default: {
        double acc = 0.0;
        for (std::size_t i = 0; i < atoms_.size() && atoms_[i] <= x; ++i) acc += probs_[i];
        return acc;
      }
    }
  }

  // P(X < x): differs from cdf only at atoms.
  double cdf_left(double x) const {
    if (is_continuous()) return cdf(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size() && atoms_[i] < x; ++i) acc += probs_[i];
    return acc;
  }

  // P(X >= x), closed lower bound.
  double tail(double x) const { return 1.0 - cdf_left(x); }

  TailStats tail_stats(double pi) const {
    double t = tail(pi);
    if (t <= 0.0) throw ZeroTailError("tail_stats: P(X >= pi) = 0");
    double partial;  // E[X 1{X >= pi}]
    switch (kind_) {
      case Kind::Pareto:
        if (pi <= 1.0) return {1.0, (1.0 + eps_) / eps_};
        return {std::pow(pi, -(1.0 + eps_)), (1.0 + 1.0 / eps_) * pi};
      case Kind::Uniform: {
        double lo = std::max(pi, a_);
        partial = (b_ * b_ - lo * lo) / (2.0 * (b_ - a_));
        return {t, partial / t};
      }
      default: {
        detail::Kahan acc;
        for (std::size_t i = 0; i < atoms_.size(); ++i)
          if (atoms_[i] >= pi) acc.add(atoms_[i] * probs_[i]);
        partial = acc.sum();
        return {t, partial / t};
      }
    }
  }

  // Integral of the cdf over [lo, hi]; used by the geometric fixed-point solver.
  double cdf_integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    switch (kind_) {
      case Kind::Uniform: {
        auto antider = [this](double x) {
          if (x <= a_) return 0.0;
          if (x >= b_) return (b_ - a_) / 2.0 + (x - b_);
          return (x - a_) * (x - a_) / (2.0 * (b_ - a_));
        };
        return antider(hi) - antider(lo);
      }
      case Kind::Pareto:
        throw std::invalid_argument("cdf_integral: unbounded value distribution");
      default: {
        // Piecewise-constant cdf.
        double acc = 0.0, prev = lo, level = cdf(lo);
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
          if (atoms_[i] <= lo) continue;
          if (atoms_[i] >= hi) break;
          acc += level * (atoms_[i] - prev);
          prev = atoms_[i];
          level += probs_[i];
        }
        acc += level * (hi - prev);
        return acc;
      }
    }
  }

  // Inverse-cdf sample from a uniform u in [0,1).
  double quantile(double u) const {
    switch (kind_) {
      case Kind::Pareto: return std::pow(1.0 - u, -1.0 / (1.0 + eps_));
      case Kind::Uniform: return a_ + (b_ - a_) * u;
      default: {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
          acc += probs_[i];
          if (u < acc) return atoms_[i];
        }
        return atoms_.back();
      }
    }
  }

 private:
  explicit ValueDist(Kind k) : kind_(k) {}

  Kind kind_;
  double eps_ = 0.0;
  double a_ = 0.0, b_ = 0.0;
  std::vector<double> atoms_;
  std::vector<double> probs_;
};

}  // namespace prophet

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prophet/distributions.hpp"

namespace prophet {

inline constexpr double kMarginTol = 1e-12;

enum class Verdict { Member, NonMember, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "member";
    case Verdict::NonMember: return "non-member";
    default: return "inconclusive";
  }
}

struct ClassReport {
  std::string label;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;  // minimum slack of the defining inequality
  // Witness attaining the margin: t for pgf-order checks, (h) or (h,k) for
  // hazard/aging checks.
  double witness_t = std::numeric_limits<double>::quiet_NaN();
  std::int64_t witness_h = 0;
  std::int64_t witness_k = 0;
  int grid_size = 0;
  int refine_depth = 0;
};

// Principal branch of the Lambert W function: w with w*e^w = z, w >= -1.
inline double lambert_w0(double z) {
  const double inv_e = std::exp(-1.0);
  if (z < -inv_e - 1e-15) throw std::domain_error("lambert_w0: z < -1/e");
  if (z < -inv_e) z = -inv_e;
  // Series in sqrt(2(ez+1)) near the branch point, where Halley loses accuracy.
  if (z < -inv_e + 1e-6) {
    double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0 - 43.0 * p * p * p * p / 540.0;
  }
  // Bisection bracket, then Halley refinement.
  double lo = -1.0, hi = 1.0;
  while (hi * std::exp(hi) < z) hi *= 2.0;
  double w = 0.5 * (lo + hi);
  for (int i = 0; i < 64; ++i) {
    w = 0.5 * (lo + hi);
    if (w * std::exp(w) < z)
      lo = w;
    else
      hi = w;
  }
  for (int i = 0; i < 8; ++i) {
    double ew = std::exp(w);
    double f = w * ew - z;
    double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0) break;
    double w_next = w - f / denom;
    if (!std::isfinite(w_next)) break;
    if (std::abs(w_next - w) < 1e-16 * (1.0 + std::abs(w))) {
      w = w_next;
      break;
    }
    w = w_next;
  }
  return w;
}

// IHR/DHR certification from the hazard sequence (lambda = 1 beyond a finite
// support per the random-horizon convention).
inline std::pair<ClassReport, ClassReport> hazard_monotonicity(const HorizonDist& H) {
  ClassReport ihr{.label = "ihr"}, dhr{.label = "dhr"};
  if (!H.is_finite()) {
    ihr.verdict = dhr.verdict = Verdict::Member;
    ihr.margin = dhr.margin = 0.0;
    ihr.witness_h = dhr.witness_h = 1;
    return {ihr, dhr};
  }
  std::int64_t m = H.max_support();
  std::int64_t lo = H.min_support();
  auto lam = [&](std::int64_t h) { return H.hazard(h); };
  ihr.margin = std::numeric_limits<double>::infinity();
  for (std::int64_t h = 1; h <= m; ++h) {
    double d = lam(h + 1) - lam(h);
    if (d < ihr.margin) {
      ihr.margin = d;
      ihr.witness_h = h;
    }
  }
  dhr.margin = std::numeric_limits<double>::infinity();
  for (std::int64_t h = lo; h <= m; ++h) {
    double d = lam(h) - lam(h + 1);
    if (d < dhr.margin) {
      dhr.margin = d;
      dhr.witness_h = h;
    }
  }
  ihr.verdict = ihr.margin >= -kMarginTol ? Verdict::Member : Verdict::NonMember;
  dhr.verdict = dhr.margin >= -kMarginTol ? Verdict::Member : Verdict::NonMember;
  return {ihr, dhr};
}

enum class PgfDirection { DominatesGeometric, DominatedByGeometric };

namespace detail {

// 2048-point grid on (0,1), geometrically clustered near t = 1 where pgf
// curves of equal mean are tangent.
inline std::vector<double> pgf_grid(int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  double g = std::exp(std::log(1e-9) / n);
  double p = 1.0;
  for (int j = 0; j < n; ++j) {
    p *= g;
    grid[static_cast<std::size_t>(j)] = 1.0 - p;
  }
  return grid;
}

// A near-zero minimum flanked by clearly positive values on both sides is a
// genuine dip whose sign the grid cannot certify; endpoint-vanishing minima
// (both pgfs meet at t = 0 and t = 1) are not.
inline bool interior_dip(const std::vector<double>& vals, std::size_t arg) {
  if (arg == 0 || arg + 1 >= vals.size()) return false;
  return vals[arg - 1] > 1e-9 && vals[arg + 1] > 1e-9;
}

}  // namespace detail

inline ClassReport pgf_order_check(const HorizonDist& H, PgfDirection dir, int grid_size = 2048) {
  ClassReport rep{.label = dir == PgfDirection::DominatesGeometric ? "g" : "gbar"};
  rep.grid_size = grid_size;
  double mu = H.mean();
  if (mu <= 1.0 + kMarginTol) {
    // Degenerate comparator: H == 1 a.s., which trivially equals Geom(1).
    rep.verdict = Verdict::Member;
    rep.margin = 0.0;
    return rep;
  }
  double qg = 1.0 - 1.0 / mu;
  auto geom_pgf = [qg, mu](double t) { return t / (mu * (1.0 - qg * t)); };
  double sign = dir == PgfDirection::DominatesGeometric ? 1.0 : -1.0;
  auto diff = [&](double t) { return sign * (geom_pgf(t) - H.pgf(t)); };

  std::vector<double> grid = detail::pgf_grid(grid_size);
  std::vector<double> vals(grid.size());
  double margin = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    vals[j] = diff(grid[j]);
    if (vals[j] < margin) {
      margin = vals[j];
      arg = j;
    }
  }
  double t_star = grid[arg];

  // Bisection refinement of grid-local minima below 1e-6.
  bool refined = false;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    bool local_min = (j == 0 || vals[j] <= vals[j - 1]) &&
                     (j + 1 == grid.size() || vals[j] <= vals[j + 1]);
    if (!local_min || vals[j] >= 1e-6) continue;
    double a = j > 0 ? grid[j - 1] : grid[j] * 0.5;
    double b = j + 1 < grid.size() ? grid[j + 1] : 0.5 * (grid[j] + 1.0);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = diff(c), fd = diff(d);
    for (int depth = 0; depth < 40; ++depth) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = diff(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = diff(d);
      }
    }
    refined = true;
    rep.refine_depth = 40;
    double tm = 0.5 * (a + b), fm = diff(tm);
    if (fm < margin) {
      margin = fm;
      t_star = tm;
    }
  }

  rep.margin = margin;
  rep.witness_t = t_star;
  if (margin < -kMarginTol) {
    rep.verdict = Verdict::NonMember;
  } else if (refined && std::abs(margin) < kMarginTol && detail::interior_dip(vals, arg)) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::Member;
  }
  return rep;
}

enum class AgingClass { NBU, HNBUE };

inline ClassReport aging_class_check(const HorizonDist& H, AgingClass cls) {
  ClassReport rep{.label = cls == AgingClass::NBU ? "nbu" : "hnbue"};
  if (!H.is_finite()) {
    // Geometric: memoryless, S(h+k) = S(h)S(k) and m(h) = mu exactly.
    rep.verdict = Verdict::Member;
    rep.margin = 0.0;
    return rep;
  }
  std::int64_t m = H.max_support();
  if (cls == AgingClass::NBU) {
    rep.margin = std::numeric_limits<double>::infinity();
    for (std::int64_t h = 2; h + 2 <= m + 1; ++h) {
      for (std::int64_t k = 2; h + k <= m + 1; ++k) {
        double slack = H.survival(h) * H.survival(k) - H.survival(h + k);
        if (slack < rep.margin) {
          rep.margin = slack;
          rep.witness_h = h;
          rep.witness_k = k;
        }
      }
    }
    if (!std::isfinite(rep.margin)) rep.margin = 0.0;  // m too small for any (h,k)
  } else {
    // Mean residual life m(h) = sum_{k>=h} S(k) / S(h), so m(1) = mu.
    std::vector<double> s(static_cast<std::size_t>(m) + 2, 0.0);
    for (std::int64_t h = 1; h <= m; ++h) s[static_cast<std::size_t>(h)] = H.survival(h);
    std::vector<double> mrl(static_cast<std::size_t>(m) + 1, 0.0);
    double tail_sum = 0.0;
    for (std::int64_t h = m; h >= 1; --h) {
      tail_sum += s[static_cast<std::size_t>(h)];
      mrl[static_cast<std::size_t>(h)] =
          s[static_cast<std::size_t>(h)] > 0.0 ? tail_sum / s[static_cast<std::size_t>(h)] : 0.0;
    }
    double mu = H.mean();
    rep.margin = std::numeric_limits<double>::infinity();
    double inv_sum = 0.0;
    for (std::int64_t n = 1; n <= m; ++n) {
      if (mrl[static_cast<std::size_t>(n)] <= 0.0) break;
      inv_sum += 1.0 / mrl[static_cast<std::size_t>(n)];
      double slack = mu - static_cast<double>(n) / inv_sum;
      if (slack < rep.margin) {
        rep.margin = slack;
        rep.witness_h = n;
      }
    }
  }
  rep.verdict = rep.margin >= -kMarginTol ? Verdict::Member : Verdict::NonMember;
  return rep;
}

struct ConcentrationReport {
  bool admissible = false;
  double min_admissible_c = 0.0;
  double cv = 0.0;
  double cv_bound = 0.0;        // sqrt(C - 1 + W0(-C e^-C))
  double variance_bound = 0.0;  // mu^2 (C - 1 + W0(-C e^-C))
  bool satisfied = false;
};

// Concentration certificate for a C-approximation; C = 2 - 1/mu reproduces
// the variance bound of the 2-approximation.
inline ConcentrationReport concentration_check(double mu, double sigma2, double c) {
  if (!(mu > 1.0)) throw std::invalid_argument("concentration_check: mu must be > 1");
  if (sigma2 < 0.0) throw std::invalid_argument("concentration_check: negative variance");
  ConcentrationReport rep;
  rep.min_admissible_c = 1.0 / (1.0 - std::pow(1.0 - 1.0 / mu, mu));
  rep.admissible = c >= rep.min_admissible_c - 1e-12;
  rep.cv = std::sqrt(sigma2) / mu;
  double inner = c - 1.0 + lambert_w0(-c * std::exp(-c));
  rep.cv_bound = inner > 0.0 ? std::sqrt(inner) : 0.0;
  rep.variance_bound = mu * mu * inner;
  rep.satisfied = rep.admissible && rep.cv <= rep.cv_bound;
  return rep;
}

}  // namespace prophet

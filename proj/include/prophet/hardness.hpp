#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "prophet/distributions.hpp"
#include "prophet/exact.hpp"

namespace prophet {

// Power-law horizon pmf(h) = h^{-1/(1+2 eps)} / Z_m on [ell, m], paired with
// Pareto(1 + eps) values.
struct HardFamilyPoint {
  std::int64_t m = 0;
  double eps = 0.0;
  std::int64_t ell = 2;
  double Z = 0.0;  // exact normalizer
  HorizonDist horizon;
  ValueDist value;

  static HardFamilyPoint make(std::int64_t m, double eps, std::int64_t ell = 2) {
    if (ell < 2 || m < ell) throw std::invalid_argument("hard family: need 2 <= ell <= m");
    if (!(eps > 0.0)) throw std::invalid_argument("hard family: eps must be > 0");
    double alpha = 1.0 / (1.0 + 2.0 * eps);
    std::vector<std::int64_t> sup(static_cast<std::size_t>(m - ell + 1));
    std::vector<double> pmf(sup.size());
    detail::Kahan z;
    for (std::int64_t h = ell; h <= m; ++h) {
      double w = std::pow(static_cast<double>(h), -alpha);
      sup[static_cast<std::size_t>(h - ell)] = h;
      pmf[static_cast<std::size_t>(h - ell)] = w;
      z.add(w);
    }
    double Z = z.sum();
    for (double& p : pmf) p /= Z;
    return HardFamilyPoint{m, eps, ell, Z, HorizonDist::finite(std::move(sup), std::move(pmf), true),
                           ValueDist::pareto(eps)};
  }

  // Z_m ~ (1 + 1/(2 eps)) m^{2 eps/(1+2 eps)}
  double Z_asymptote() const {
    return (1.0 + 1.0 / (2.0 * eps)) * std::pow(static_cast<double>(m), 2.0 * eps / (1.0 + 2.0 * eps));
  }
};

struct ProphetMeanReport {
  double exact = 0.0;
  double asymptote = 0.0;  // N(eps) m^{1/(1+eps)}
};

// E M_{H_m} exactly, plus the large-m asymptote with
// N(eps) = Gamma(1 - 1/(1+eps)) / ([1 + eps/((1+eps)(1+2eps))][1 + 1/(2 eps)]).
inline ProphetMeanReport hard_prophet_mean(const HardFamilyPoint& pt) {
  ProphetMeanReport rep;
  detail::Kahan acc;
  const auto& sup = pt.horizon.support();
  const auto& pmf = pt.horizon.pmf();
  for (std::size_t i = 0; i < sup.size(); ++i)
    acc.add(pmf[i] * pareto_prophet_mean(sup[i], pt.eps));
  rep.exact = acc.sum();
  double e = pt.eps;
  double N = std::tgamma(1.0 - 1.0 / (1.0 + e)) /
             ((1.0 + e / ((1.0 + e) * (1.0 + 2.0 * e))) * (1.0 + 1.0 / (2.0 * e)));
  rep.asymptote = N * std::pow(static_cast<double>(pt.m), 1.0 / (1.0 + e));
  return rep;
}

namespace detail {

// One pass over the horizon table: a = E[(1-s)^H], b = E[H (1-s)^{H-1}].
struct GExpectations {
  double a = 0.0;
  double b = 0.0;
};

inline GExpectations g_expectations(const HorizonDist& H, double s) {
  GExpectations g;
  Kahan a, b;
  const auto& sup = H.support();
  const auto& pmf = H.pmf();
  for (std::size_t i = 0; i < sup.size(); ++i) {
    double h = static_cast<double>(sup[i]);
    double pow_h1 = one_minus_pow(s, h - 1.0);
    a.add(pmf[i] * pow_h1 * (1.0 - s));
    b.add(pmf[i] * h * pow_h1);
  }
  g.a = a.sum();
  g.b = b.sum();
  return g;
}

}  // namespace detail

struct SingleThresholdReport {
  double pi_bar = 1.0;
  double value = 0.0;
  double c = 0.0;           // acceptance constant 1 - E[(1-s)^H] at pi_bar
  double g_residual = 0.0;  // |g(pi_bar) - 1|, ~0 except at the pi = 1 boundary
  bool boundary = false;    // maximum at pi = 1 (accept everything)
  bool audit_ok = false;    // f(pi_bar) >= f on the 512-point audit grid
};

// Best fixed threshold for a hard-family point: maximize
// f(pi) = (1 + 1/eps) pi (1 - E[(1-s)^H]), s = pi^{-(1+eps)}, via the
// stationarity equation g(pi) = E[(1-s)^H] + (1+eps) s E[H (1-s)^{H-1}] = 1
// (f' = (1 + 1/eps)(1 - g)).
inline SingleThresholdReport optimal_single_threshold(const HardFamilyPoint& pt) {
  double e = pt.eps;
  auto g_of = [&](double pi) {
    double s = std::pow(pi, -(1.0 + e));
    auto ge = detail::g_expectations(pt.horizon, s);
    return ge.a + (1.0 + e) * s * ge.b;
  };
  auto f_of = [&](double pi) {
    double s = std::pow(pi, -(1.0 + e));
    return (1.0 + 1.0 / e) * pi * (1.0 - detail::g_expectations(pt.horizon, s).a);
  };

  SingleThresholdReport rep;
  if (g_of(1.0) >= 1.0) {
    // f decreasing from the start: accept everything, value E X.
    rep.boundary = true;
    rep.pi_bar = 1.0;
    rep.value = f_of(1.0);
    rep.c = 1.0;
    rep.g_residual = std::abs(g_of(1.0) - 1.0);
  } else {
    double lo = 1.0;
    double hi = 2.0 * std::pow(pt.horizon.mean(), 1.0 / (1.0 + e));
    int grow = 0;
    while (g_of(hi) < 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++grow > 60) throw std::overflow_error("optimal_single_threshold: bracket growth cap");
    }
    while (hi - lo > 1e-10 * hi) {
      double mid = 0.5 * (lo + hi);
      if (g_of(mid) < 1.0)
        lo = mid;
      else
        hi = mid;
    }
    rep.pi_bar = 0.5 * (lo + hi);
    rep.g_residual = std::abs(g_of(rep.pi_bar) - 1.0);
    rep.value = f_of(rep.pi_bar);
    double s = std::pow(rep.pi_bar, -(1.0 + e));
    rep.c = 1.0 - detail::g_expectations(pt.horizon, s).a;
  }

  // Audit: the stationary point must dominate a global grid; ties resolve
  // toward the audited argmax.
  double span = std::max(4.0 * rep.pi_bar, 4.0 * std::pow(pt.horizon.mean(), 1.0 / (1.0 + e)));
  rep.audit_ok = true;
  for (int j = 0; j < 512; ++j) {
    double pi = 1.0 + (span - 1.0) * (static_cast<double>(j) + 0.5) / 512.0;
    double f = f_of(pi);
    if (f > rep.value * (1.0 + 1e-9)) {
      rep.pi_bar = pi;
      rep.value = f;
      rep.audit_ok = false;
    }
  }
  return rep;
}

struct HardCurveRow {
  std::int64_t m = 0;
  double Z = 0.0;
  double E_H = 0.0;
  double E_MH = 0.0;
  double pi_bar = 0.0;
  double gambler = 0.0;
  double ratio = 0.0;
};

inline std::vector<HardCurveRow> hard_ratio_curve(double eps, const std::vector<std::int64_t>& ms,
                                                  std::int64_t ell = 2) {
  std::vector<HardCurveRow> rows;
  rows.reserve(ms.size());
  for (std::int64_t m : ms) {
    HardFamilyPoint pt = HardFamilyPoint::make(m, eps, ell);
    HardCurveRow row;
    row.m = m;
    row.Z = pt.Z;
    row.E_H = pt.horizon.mean();
    row.E_MH = hard_prophet_mean(pt).exact;
    SingleThresholdReport st = optimal_single_threshold(pt);
    row.pi_bar = st.pi_bar;
    row.gambler = st.value;
    row.ratio = row.E_MH > 0.0 ? row.gambler / row.E_MH : 0.0;
    rows.push_back(row);
  }
  return rows;
}

// The hard family with extra weight delta_m = C m^{2 eps/(1+2 eps)} at h = 1,
// C = (3 + 10 eps)/(2 eps); pushes the horizon into the Gbar class while the
// single-threshold ratio still vanishes.
struct PerturbedFamilyPoint {
  HardFamilyPoint base;
  double C = 0.0;
  double delta = 0.0;
  double Z_tilde = 0.0;
  double mu_tilde = 0.0;
  double eps_m = 0.0;  // Z_tilde / mu_tilde
  double eta_m = 0.0;  // (1 - eps_m/delta) / (1 - 1/mu_tilde)
  HorizonDist horizon;
};

inline PerturbedFamilyPoint perturbed_horizon(std::int64_t m, double eps) {
  if (!(eps > 0.0 && eps < 0.25))
    throw std::invalid_argument("perturbed_horizon: eps must be in (0, 1/4)");
  HardFamilyPoint base = HardFamilyPoint::make(m, eps, 2);
  double C = (3.0 + 10.0 * eps) / (2.0 * eps);
  double delta = C * std::pow(static_cast<double>(m), 2.0 * eps / (1.0 + 2.0 * eps));
  double Zt = base.Z + delta;

  std::vector<std::int64_t> sup(static_cast<std::size_t>(m));
  std::vector<double> pmf(sup.size());
  sup[0] = 1;
  pmf[0] = delta / Zt;
  double alpha = 1.0 / (1.0 + 2.0 * eps);
  for (std::int64_t h = 2; h <= m; ++h) {
    sup[static_cast<std::size_t>(h - 1)] = h;
    pmf[static_cast<std::size_t>(h - 1)] = std::pow(static_cast<double>(h), -alpha) / Zt;
  }
  HorizonDist Ht = HorizonDist::finite(std::move(sup), std::move(pmf), true);
  double mu = Ht.mean();
  double eps_m = Zt / mu;
  double eta = (1.0 - eps_m / delta) / (1.0 - 1.0 / mu);
  return PerturbedFamilyPoint{std::move(base), C, delta, Zt, mu, eps_m, eta, std::move(Ht)};
}

struct GbarStepReport {
  double linear_slack = 0.0;   // min over (0, eta] of delta t - eps_m t / (1 - t(1-1/mu))
  double concave_slack = 0.0;  // min over [eta, 1) of RHS - LHS of the curvature bound
  double target_slack = 0.0;   // min over (0,1) of LHS - RHS of the pgf target inequality
  bool all_nonnegative = false;
};

// Grid verification of the three Step-1 inequalities behind Gbar membership
// of the perturbed family. A negative slack is a legitimate report for small
// m; the guarantee is asymptotic.
inline GbarStepReport gbar_step_verify(const PerturbedFamilyPoint& pt, int target_grid = 4096,
                                       int side_grid = 512) {
  double alpha = 1.0 / (1.0 + 2.0 * pt.base.eps);
  double r = 1.0 - 1.0 / pt.mu_tilde;
  auto weight_sum = [&](double t) {  // sum_{h=2}^m t^h h^{-alpha}
    detail::Kahan acc;
    double th = t;  // t^1
    for (std::int64_t h = 2; h <= pt.base.m; ++h) {
      th *= t;
      acc.add(th * std::pow(static_cast<double>(h), -alpha));
      if (th < 1e-300) break;
    }
    return acc.sum();
  };
  auto curvature_sum = [&](double t) {  // sum_{h=2}^m h(h-1) t^{h-2} h^{-alpha}
    detail::Kahan acc;
    double th = 1.0;  // t^0
    for (std::int64_t h = 2; h <= pt.base.m; ++h) {
      double hd = static_cast<double>(h);
      acc.add(hd * (hd - 1.0) * th * std::pow(hd, -alpha));
      th *= t;
      if (th < 1e-300) break;
    }
    return acc.sum();
  };

  GbarStepReport rep;
  rep.linear_slack = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= side_grid; ++j) {
    double t = pt.eta_m * static_cast<double>(j) / side_grid;
    double slack = pt.delta * t - pt.eps_m * t / (1.0 - t * r);
    rep.linear_slack = std::min(rep.linear_slack, slack);
  }
  rep.concave_slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < side_grid; ++j) {
    double t = pt.eta_m + (1.0 - pt.eta_m) * static_cast<double>(j) / side_grid;
    double rhs = 2.0 * pt.eps_m * r / std::pow(1.0 - t * r, 3.0);
    rep.concave_slack = std::min(rep.concave_slack, rhs - curvature_sum(t));
  }
  rep.target_slack = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= target_grid; ++j) {
    double t = static_cast<double>(j) / (target_grid + 1);
    double rhs = -pt.delta * t + pt.eps_m * t / (1.0 - t * r);
    rep.target_slack = std::min(rep.target_slack, weight_sum(t) - rhs);
  }
  rep.all_nonnegative =
      rep.linear_slack >= 0.0 && rep.concave_slack >= 0.0 && rep.target_slack >= 0.0;
  return rep;
}

struct CvReport {
  double cv2 = 0.0;
  double limit = 0.0;  // (1+4 eps)^2 / (4 eps (1+3 eps)) - 1
};

inline CvReport hard_family_cv(double eps, std::int64_t m, std::int64_t ell = 2) {
  HardFamilyPoint pt = HardFamilyPoint::make(m, eps, ell);
  double m1 = pt.horizon.moment(1);
  double m2 = pt.horizon.moment(2);
  CvReport rep;
  rep.cv2 = m2 / (m1 * m1) - 1.0;
  rep.limit = (1.0 + 4.0 * eps) * (1.0 + 4.0 * eps) / (4.0 * eps * (1.0 + 3.0 * eps)) - 1.0;
  return rep;
}

struct MomentRow {
  std::int64_t m = 0;
  double exact = 0.0;
  double asymptote = 0.0;  // 2 eps m^n / (n + 2(n+1) eps)
  double ratio = 0.0;
};

inline std::vector<MomentRow> horizon_moment_asymptotics(double eps, int n,
                                                         const std::vector<std::int64_t>& ms,
                                                         std::int64_t ell = 2) {
  if (n < 1) throw std::invalid_argument("horizon_moment_asymptotics: n must be >= 1");
  std::vector<MomentRow> rows;
  rows.reserve(ms.size());
  for (std::int64_t m : ms) {
    HardFamilyPoint pt = HardFamilyPoint::make(m, eps, ell);
    MomentRow row;
    row.m = m;
    row.exact = pt.horizon.moment(n);
    double nd = static_cast<double>(n);
    row.asymptote = 2.0 * eps * std::pow(static_cast<double>(m), nd) /
                    (nd + 2.0 * (nd + 1.0) * eps);
    row.ratio = row.exact / row.asymptote;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace prophet

#ifndef SPIKEKIT_SCALAR_ANALYSIS_HPP
#define SPIKEKIT_SCALAR_ANALYSIS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>

#include "spikekit/errors.hpp"
#include "spikekit/params.hpp"

namespace spikekit {

// Reaction scalar R_delta(t) = -t + m (t+c)^p / delta and the structure of
// its positive roots.  Everything here is a pure function of value inputs.

inline double reaction(double m, double p, double c, double delta, double t) {
  return -t + m * std::pow(t + c, p) / delta;
}

inline double reaction_deriv(double m, double p, double c, double delta,
                             double t) {
  return -1.0 + m * p * std::pow(t + c, p - 1.0) / delta;
}

// Threshold below which R_delta has no positive root:
//   delta0 = m p (p c / (p-1))^(p-1)
inline double delta_lower_bound(const ModelParams& q) {
  if (!(q.p > 1.0))
    throw validation_error("delta_lower_bound: requires p > 1");
  if (!(q.c > 0.0) || !(q.m > 0.0))
    throw validation_error("delta_lower_bound: requires c > 0 and m > 0");
  return q.m * q.p * std::pow(q.p * q.c / (q.p - 1.0), q.p - 1.0);
}

// Critical point of R_delta; R'_delta(t_star) = 0 in closed form.
inline double critical_point(const ModelParams& q, double delta) {
  if (!(delta > 0.0)) throw validation_error("critical_point: delta <= 0");
  return std::pow(delta / (q.m * q.p), 1.0 / (q.p - 1.0)) - q.c;
}

struct Roots {
  double t1 = 0.0;
  double t2 = 0.0;
  bool double_root = false;
};

namespace detail {

// Safeguarded Newton on a bracketed monotone piece: falls back to bisection
// whenever the Newton step leaves the bracket.
template <class F, class DF>
double solve_bracketed(F f, DF df, double lo, double hi, double flo,
                       double fhi, double rel_tol) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    double d = df(x);
    double step = (d != 0.0) ? -fx / d : 0.0;
    double xn = x + step;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * (std::fabs(lo) + std::fabs(hi)) +
                       std::numeric_limits<double>::min())
      return xn;
    if (std::fabs(xn - x) <= rel_tol * std::fabs(xn)) {
      x = xn;
      break;
    }
    x = xn;
  }
  // polish
  for (int it = 0; it < 3; ++it) {
    double d = df(x);
    if (d == 0.0) break;
    double xn = x - f(x) / d;
    if (xn > lo && xn < hi) x = xn;
  }
  return x;
}

} // namespace detail

// Positive roots of R_delta.  Returns nothing for delta < delta0, the exact
// double root t* = c/(p-1) within 1e-10*delta0 of the threshold, and the
// bracketed pair 0 < t1 < t* < t2 otherwise.
inline std::optional<Roots> solve_roots(const ModelParams& q, double delta) {
  if (!(delta > 0.0)) throw validation_error("solve_roots: delta <= 0");
  const double d0 = delta_lower_bound(q);
  if (delta < d0 * (1.0 - 1e-10)) return std::nullopt;
  if (std::fabs(delta - d0) <= 1e-10 * d0) {
    Roots r;
    r.t1 = r.t2 = q.c / (q.p - 1.0);
    r.double_root = true;
    return r;
  }
  const double m = q.m, p = q.p, c = q.c;
  const double ts = critical_point(q, delta);
  auto f = [&](double t) { return reaction(m, p, c, delta, t); };
  auto df = [&](double t) { return reaction_deriv(m, p, c, delta, t); };

  Roots r;
  // R(0) = m c^p / delta > 0 and R(t*) < 0
  r.t1 = detail::solve_bracketed(f, df, 0.0, ts, f(0.0), f(ts), 1e-13);
  // R is positive at the upper bound (delta/m)^(1/(p-1))
  const double hi = std::pow(delta / m, 1.0 / (p - 1.0));
  r.t2 = detail::solve_bracketed(f, df, ts, hi, f(ts), f(hi), 1e-13);
  r.double_root = false;
  return r;
}

// Scalar structure of the reduced problem at a fixed delta >= delta0.
// m and p ride along so that the transformed nonlinearity is self-contained.
struct DeltaAnalysis {
  double delta = 0.0;
  double delta0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_star = 0.0;
  double c_delta = 0.0;
  double t_delta = 0.0;
  double m = 1.0;
  double p = 2.0;
  double c = 1.0;

  // delta -> infinity limit: t_delta = 0 and a prescribed c_delta; used by
  // the pure power-law oracles.
  static DeltaAnalysis limiting(double m, double p, double c_delta) {
    DeltaAnalysis a;
    a.delta = std::numeric_limits<double>::infinity();
    a.delta0 = 0.0;
    a.t1 = 0.0;
    a.t2 = std::numeric_limits<double>::infinity();
    a.t_star = 0.0;
    a.c_delta = c_delta;
    a.t_delta = 0.0;
    a.m = m;
    a.p = p;
    a.c = 0.0;
    return a;
  }
};

inline DeltaAnalysis analyze_delta(const ModelParams& q, double delta) {
  const double d0 = delta_lower_bound(q);
  if (delta < d0 * (1.0 - 1e-10))
    throw validation_error("analyze_delta: delta below the existence "
                           "threshold delta0");
  auto roots = solve_roots(q, delta);
  DeltaAnalysis a;
  a.delta = delta;
  a.delta0 = d0;
  a.t1 = roots->t1;
  a.t2 = roots->t2;
  a.t_star = roots->double_root ? q.c / (q.p - 1.0) : critical_point(q, delta);
  a.m = q.m;
  a.p = q.p;
  a.c = q.c;
  const double s = std::pow(delta, -1.0 / (q.p - 1.0));
  a.t_delta = (a.t1 + q.c) * s;
  // the two algebraically equal forms of c_delta, cross-checked on the root
  const double c1 =
      1.0 - (q.m * q.p / delta) * std::pow(a.t1 + q.c, q.p - 1.0);
  const double c2 = 1.0 - q.p * a.t1 / (a.t1 + q.c);
  if (std::fabs(c1 - c2) > 1e-10)
    throw solver_error("analyze_delta: c_delta cross-check failed");
  a.c_delta = roots->double_root ? 0.0 : c1;
  return a;
}

// Transformed nonlinearity f_delta(w) = m((w+t_d)^p - p t_d^(p-1) w - t_d^p),
// truncated to 0 for w < 0.
inline double f_delta(const DeltaAnalysis& a, double w) {
  if (w <= 0.0) return 0.0;
  const double td = a.t_delta;
  if (td == 0.0) return a.m * std::pow(w, a.p);
  return a.m * (std::pow(w + td, a.p) -
                a.p * std::pow(td, a.p - 1.0) * w - std::pow(td, a.p));
}

inline double f_delta_deriv(const DeltaAnalysis& a, double w) {
  if (w <= 0.0) return 0.0;
  const double td = a.t_delta;
  if (td == 0.0) return a.m * a.p * std::pow(w, a.p - 1.0);
  return a.m * a.p *
         (std::pow(w + td, a.p - 1.0) - std::pow(td, a.p - 1.0));
}

// Antiderivative of f_delta with F_delta(0) = 0.
inline double F_delta(const DeltaAnalysis& a, double w) {
  if (w <= 0.0) return 0.0;
  const double td = a.t_delta, p = a.p;
  if (td == 0.0) return a.m * std::pow(w, p + 1.0) / (p + 1.0);
  return a.m * (std::pow(w + td, p + 1.0) / (p + 1.0) -
                0.5 * p * std::pow(td, p - 1.0) * w * w -
                std::pow(td, p) * w - std::pow(td, p + 1.0) / (p + 1.0));
}

// Supremum over the sample grid of F_delta(t) / (f_delta(t) t).  The claim
// that this stays below 1/2 for every delta >= delta0 is tested, not assumed.
inline double theta_bound(const DeltaAnalysis& a, std::span<const double> t_grid) {
  if (t_grid.empty())
    throw validation_error("theta_bound: empty sample grid");
  double sup = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw validation_error("theta_bound: grid point <= 0");
    double ft = f_delta(a, t);
    if (ft <= 0.0) continue;
    double ratio = F_delta(a, t) / (ft * t);
    if (ratio > sup) sup = ratio;
  }
  return sup;
}

// Smallest a1 with f_delta(t) <= a1 + 2 m t^p on the grid; a2 is pinned at
// 2m by the superlinear growth of f_delta.
inline std::pair<double, double>
growth_envelope_check(const DeltaAnalysis& a, std::span<const double> t_grid) {
  double a1 = 0.0;
  for (double t : t_grid) {
    if (t < 0.0)
      throw validation_error("growth_envelope_check: grid point < 0");
    double excess = f_delta(a, t) - 2.0 * a.m * std::pow(t, a.p);
    if (excess > a1) a1 = excess;
  }
  return {a1, 2.0 * a.m};
}

// Positive root of c_delta w = f_delta(w): the constant solution of the
// transformed equation.  Closed form (t2-t1) delta^(-1/(p-1)) when the
// analysis came from a finite delta.
inline double constant_solution(const DeltaAnalysis& a) {
  if (!(a.c_delta > 0.0))
    throw validation_error("constant_solution: degenerate c_delta = 0");
  if (std::isfinite(a.delta))
    return (a.t2 - a.t1) * std::pow(a.delta, -1.0 / (a.p - 1.0));
  return std::pow(a.c_delta / a.m, 1.0 / (a.p - 1.0));
}

} // namespace spikekit

#endif

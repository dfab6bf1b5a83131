#ifndef SPIKEKIT_TEST_ORACLES_HPP
#define SPIKEKIT_TEST_ORACLES_HPP

// Independent oracles used only by the tests: brute-force scans, quadrature
// and closed-form special cases.  Nothing in here may call into the
// implementation path it is checking.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Dense scan minimum of a scalar function on [a, b].
inline std::pair<double, double>
scan_min(const std::function<double(double)>& f, double a, double b, int n) {
  double best_t = a, best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    double t = a + (b - a) * double(i) / n;
    double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_t, best_v};
}

// Closed-form roots of -t + m (t+c)^2 / delta = 0 (the p = 2 case):
// m t^2 + (2 m c - delta) t + m c^2 = 0.
inline std::optional<std::pair<double, double>>
quadratic_roots_p2(double m, double c, double delta) {
  double A = m, B = 2.0 * m * c - delta, C = m * c * c;
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return std::nullopt;
  double s = std::sqrt(disc);
  double t1 = (-B - s) / (2.0 * A);
  double t2 = (-B + s) / (2.0 * A);
  return std::make_pair(t1, t2);
}

// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Least-squares slope and intercept of y against x.
inline std::pair<double, double> linear_fit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

inline double fit_r_squared(const std::vector<double>& x,
                            const std::vector<double>& y, double slope,
                            double intercept) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= double(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (slope * x[i] + intercept);
    ss_res += e * e;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

} // namespace oracles

#endif

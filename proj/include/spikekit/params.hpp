#ifndef SPIKEKIT_PARAMS_HPP
#define SPIKEKIT_PARAMS_HPP

#include <cmath>
#include <string>

#include "spikekit/errors.hpp"

namespace spikekit {

// Physical parameters of the chemotaxis system together with the derived
// quantities used throughout:
//   eps^2 = d2 / alpha,   p = chi / d1,   m = beta * M / alpha.
struct ModelParams {
  double d1 = 1.0;    // cell diffusion rate
  double d2 = 1.0;    // chemical diffusion rate
  double chi = 2.0;   // chemotactic coefficient
  double alpha = 1.0; // chemical decay rate
  double beta = 1.0;  // chemical production rate
  double c = 1.0;     // sensitivity saturation constant
  double M = 1.0;     // total cell mass

  double eps = 1.0;
  double p = 2.0;
  double m = 1.0;

  static ModelParams make(double d1, double d2, double chi, double alpha,
                          double beta, double c, double M) {
    auto require_pos = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw validation_error(std::string("ModelParams: ") + name +
                               " must be a positive finite number");
    };
    require_pos(d1, "d1");
    require_pos(d2, "d2");
    require_pos(chi, "chi");
    require_pos(alpha, "alpha");
    require_pos(beta, "beta");
    require_pos(c, "c");
    require_pos(M, "M");
    ModelParams q;
    q.d1 = d1;
    q.d2 = d2;
    q.chi = chi;
    q.alpha = alpha;
    q.beta = beta;
    q.c = c;
    q.M = M;
    q.eps = std::sqrt(d2 / alpha);
    q.p = chi / d1;
    q.m = beta * M / alpha;
    return q;
  }

  // p > 1 always; p < (N+2)/(N-2) additionally required for N >= 3
  bool subcritical(int N) const {
    if (!(p > 1.0)) return false;
    if (N >= 3 && !(p < double(N + 2) / double(N - 2))) return false;
    return true;
  }

  // Upper mass bound under which the steady-state theory applies.
  double mass_bound(double volume) const {
    return alpha * c * volume / (beta * (p - 1.0));
  }

  // Recorded, not enforced: runs outside the bound are stamped as such.
  bool hypothesis_holds(double volume) const { return M <= mass_bound(volume); }
};

} // namespace spikekit

#endif

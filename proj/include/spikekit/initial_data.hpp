#ifndef SPIKEKIT_INITIAL_DATA_HPP
#define SPIKEKIT_INITIAL_DATA_HPP

#include <cmath>
#include <vector>

#include "spikekit/grid.hpp"

namespace spikekit {

// Initial data family: constant + sum of amp*cos(kx pi (x-sx))*cos(ky pi (y-sy)).
// Every reference experiment's initial condition is expressible exactly.
struct CosineTerm {
  double amp = 0.0;
  double kx = 0.0;
  double sx = 0.0;
  double ky = 0.0;
  double sy = 0.0;
};

struct InitialData {
  double constant = 0.0;
  std::vector<CosineTerm> terms;

  Field build(const Grid& g) const {
    constexpr double pi = 3.14159265358979323846;
    return Field::sample(g, [&](double x, double y) {
      double val = constant;
      for (const auto& tm : terms) {
        double f = tm.amp * std::cos(tm.kx * pi * (x - tm.sx));
        if (g.dom.dim == 2) f *= std::cos(tm.ky * pi * (y - tm.sy));
        val += f;
      }
      return val;
    });
  }
};

} // namespace spikekit

#endif

#ifndef SPIKEKIT_GRID_HPP
#define SPIKEKIT_GRID_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "spikekit/errors.hpp"
#include "spikekit/reduce.hpp"

namespace spikekit {

// Rectangle (or interval) with homogeneous Neumann boundary everywhere.
struct Domain {
  int dim = 1;
  double Lx = 1.0;
  double Ly = 0.0;

  static Domain interval(double Lx) {
    if (!(Lx > 0.0)) throw validation_error("Domain: Lx must be positive");
    return Domain{1, Lx, 0.0};
  }
  static Domain rectangle(double Lx, double Ly) {
    if (!(Lx > 0.0) || !(Ly > 0.0))
      throw validation_error("Domain: side lengths must be positive");
    return Domain{2, Lx, Ly};
  }
  double volume() const { return dim == 1 ? Lx : Lx * Ly; }
};

// Uniform cell-centered grid.  Cell (i,j) has center
// ((i+1/2)hx, (j+1/2)hy); ghost reflection makes homogeneous Neumann exact
// for the stencils below and keeps quadrature and stencil summation-by-parts
// compatible.
struct Grid {
  Domain dom;
  int nx = 8;
  int ny = 1; // 1 in one dimension
  double hx = 0.0;
  double hy = 0.0;

  static Grid make(const Domain& d, int nx, int ny = 1) {
    if (nx < 8) throw validation_error("Grid: nx must be >= 8");
    if (d.dim == 2 && ny < 8) throw validation_error("Grid: ny must be >= 8");
    Grid g;
    g.dom = d;
    g.nx = nx;
    g.ny = d.dim == 1 ? 1 : ny;
    g.hx = d.Lx / nx;
    g.hy = d.dim == 1 ? 0.0 : d.Ly / ny;
    return g;
  }

  std::size_t cells() const { return std::size_t(nx) * std::size_t(ny); }
  double cell_volume() const { return dom.dim == 1 ? hx : hx * hy; }
  double x(int i) const { return (i + 0.5) * hx; }
  double y(int j) const { return dom.dim == 1 ? 0.0 : (j + 0.5) * hy; }
  std::size_t idx(int i, int j) const {
    return std::size_t(j) * std::size_t(nx) + std::size_t(i);
  }
  bool same_as(const Grid& o) const {
    return dom.dim == o.dom.dim && nx == o.nx && ny == o.ny &&
           dom.Lx == o.dom.Lx && dom.Ly == o.dom.Ly;
  }
};

// Scalar grid function, one value per cell, row-major.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), v(g.cells(), fill) {}

  double& operator()(int i, int j = 0) { return v[grid.idx(i, j)]; }
  double operator()(int i, int j = 0) const { return v[grid.idx(i, j)]; }
  std::size_t size() const { return v.size(); }

  template <class Fn> static Field sample(const Grid& g, Fn&& fn) {
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        f.v[g.idx(i, j)] = fn(g.x(i), g.y(j));
    return f;
  }
};

inline void require_same_grid(const Field& a, const Field& b,
                              const char* where) {
  if (!a.grid.same_as(b.grid))
    throw validation_error(std::string(where) + ": grids differ");
}

inline bool all_finite(const Field& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

// 3-point (1D) / 5-point (2D) Laplacian with ghost-cell reflection.
// Discrete divergence theorem: the result integrates to zero exactly.
inline Field laplacian_neumann(const Field& f) {
  const Grid& g = f.grid;
  Field out(g);
  const int nx = g.nx, ny = g.ny;
  const double ax = 1.0 / (g.hx * g.hx);
  if (g.dom.dim == 1) {
    const double* u = f.v.data();
    double* r = out.v.data();
    for (int i = 0; i < nx; ++i) {
      double l = (i > 0) ? u[i - 1] : u[0];
      double rr = (i < nx - 1) ? u[i + 1] : u[nx - 1];
      r[i] = ax * (l - 2.0 * u[i] + rr);
    }
    return out;
  }
  const double ay = 1.0 / (g.hy * g.hy);
  const double* u = f.v.data();
  double* r = out.v.data();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::size_t k = g.idx(i, j);
      double l = (i > 0) ? u[k - 1] : u[k];
      double rt = (i < nx - 1) ? u[k + 1] : u[k];
      double d = (j > 0) ? u[k - nx] : u[k];
      double up = (j < ny - 1) ? u[k + nx] : u[k];
      r[k] = ax * (l - 2.0 * u[k] + rt) + ay * (d - 2.0 * u[k] + up);
    }
  }
  return out;
}

// Midpoint rule; exact for cell-wise constants, deterministic order.
inline double integrate(const Field& f) {
  return det_sum(f.v.data(), f.v.size()) * f.grid.cell_volume();
}

// Face quadrature of the squared gradient.  Boundary faces contribute zero
// (reflected ghosts), matching the stencil above summation-by-parts exactly.
inline double grad_sq_integral(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.nx, ny = g.ny;
  const double* u = f.v.data();
  std::vector<double> face;
  face.reserve(g.cells() * (g.dom.dim == 1 ? 1 : 2));
  if (g.dom.dim == 1) {
    for (int i = 0; i + 1 < nx; ++i) {
      double d = (u[i + 1] - u[i]) / g.hx;
      face.push_back(d * d * g.hx);
    }
    return det_sum(face.data(), face.size());
  }
  const double av = g.hx * g.hy;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      double d = (u[g.idx(i + 1, j)] - u[g.idx(i, j)]) / g.hx;
      face.push_back(d * d * av);
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double d = (u[g.idx(i, j + 1)] - u[g.idx(i, j)]) / g.hy;
      face.push_back(d * d * av);
    }
  return det_sum(face.data(), face.size());
}

// || f ||_eps = sqrt( int eps^2 |grad f|^2 + c_delta f^2 ).
inline double h1_eps_norm(const Field& f, double eps, double c_delta) {
  if (!(eps > 0.0)) throw validation_error("h1_eps_norm: eps <= 0");
  if (!(c_delta > 0.0))
    throw validation_error("h1_eps_norm: c_delta <= 0 (degenerate delta0 "
                           "case is rejected here)");
  std::vector<double> sq(f.v.size());
  for (std::size_t k = 0; k < f.v.size(); ++k) sq[k] = f.v[k] * f.v[k];
  double l2 = det_sum(sq.data(), sq.size()) * f.grid.cell_volume();
  return std::sqrt(eps * eps * grad_sq_integral(f) + c_delta * l2);
}

inline double linf_norm(const Field& f) {
  return det_max_abs(f.v.data(), f.v.size());
}

inline double max_value(const Field& f) {
  return det_max(f.v.data(), f.v.size());
}

inline double min_value(const Field& f) {
  return det_min(f.v.data(), f.v.size());
}

} // namespace spikekit

#endif

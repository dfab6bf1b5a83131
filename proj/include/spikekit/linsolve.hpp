#ifndef SPIKEKIT_LINSOLVE_HPP
#define SPIKEKIT_LINSOLVE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "spikekit/errors.hpp"
#include "spikekit/reduce.hpp"

namespace spikekit {

// Matrix-free Krylov solvers over raw arrays.  All inner products go through
// det_sum, so iteration histories are bit-reproducible for any thread count.

namespace detail {

inline double dot(const double* a, const double* b, std::size_t n,
                  std::vector<double>& scratch) {
  scratch.resize(n);
  parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) scratch[i] = a[i] * b[i];
  });
  return det_sum(scratch.data(), n);
}

inline double norm2(const double* a, std::size_t n,
                    std::vector<double>& scratch) {
  return std::sqrt(dot(a, a, n, scratch));
}

} // namespace detail

struct KrylovResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients for SPD operators; x carries the warm start.
template <class Apply>
KrylovResult conjugate_gradient(Apply&& A, const double* b, double* x,
                                std::size_t n, double rel_tol, int max_iter) {
  std::vector<double> r(n), p(n), Ap(n), scratch;
  A(x, Ap.data());
  parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      r[i] = b[i] - Ap[i];
      p[i] = r[i];
    }
  });
  const double bnorm = detail::norm2(b, n, scratch);
  if (bnorm == 0.0) {
    for (std::size_t i = 0; i < n; ++i) x[i] = 0.0;
    return {0, 0.0, true};
  }
  double rr = detail::dot(r.data(), r.data(), n, scratch);
  KrylovResult res;
  res.rel_residual = std::sqrt(rr) / bnorm;
  if (res.rel_residual <= rel_tol) {
    res.converged = true;
    return res;
  }
  for (int it = 1; it <= max_iter; ++it) {
    A(p.data(), Ap.data());
    double pAp = detail::dot(p.data(), Ap.data(), n, scratch);
    if (pAp <= 0.0)
      throw solver_error("conjugate_gradient: operator not positive "
                         "definite along search direction");
    double alpha = rr / pAp;
    parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * Ap[i];
      }
    });
    double rr_new = detail::dot(r.data(), r.data(), n, scratch);
    res.iterations = it;
    res.rel_residual = std::sqrt(rr_new) / bnorm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    double beta = rr_new / rr;
    rr = rr_new;
    parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) p[i] = r[i] + beta * p[i];
    });
  }
  return res;
}

// MINRES (Paige-Saunders) for symmetric, possibly indefinite operators.
// The Newton systems around spike profiles have exactly one eigenvalue of
// the "wrong" sign, which plain CG cannot handle.
template <class Apply>
KrylovResult minres(Apply&& A, const double* b, double* x, std::size_t n,
                    double rel_tol, int max_iter) {
  std::vector<double> r(n), v_prev(n, 0.0), v(n), v_next(n), w(n, 0.0),
      w_prev(n, 0.0), scratch;
  A(x, v_next.data());
  parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) r[i] = b[i] - v_next[i];
  });
  const double bnorm = detail::norm2(b, n, scratch);
  double beta = detail::norm2(r.data(), n, scratch);
  KrylovResult res;
  if (bnorm == 0.0 || beta == 0.0) {
    res.converged = true;
    res.rel_residual = bnorm == 0.0 ? 0.0 : beta / bnorm;
    return res;
  }
  if (beta / bnorm <= rel_tol) {
    res.converged = true;
    res.rel_residual = beta / bnorm;
    return res;
  }
  parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) v[i] = r[i] / beta;
  });
  double eta = beta;
  double gamma_old = 1.0, gamma = 1.0, sigma_old = 0.0, sigma = 0.0;
  double beta_old = beta;

  for (int it = 1; it <= max_iter; ++it) {
    A(v.data(), v_next.data());
    double alpha = detail::dot(v.data(), v_next.data(), n, scratch);
    parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i)
        v_next[i] -= alpha * v[i] + beta * v_prev[i];
    });
    double beta_next = detail::norm2(v_next.data(), n, scratch);

    double delta = gamma * alpha - gamma_old * sigma * beta;
    double rho1 = std::sqrt(delta * delta + beta_next * beta_next);
    double rho2 = sigma * alpha + gamma_old * gamma * beta;
    double rho3 = sigma_old * beta;
    if (rho1 == 0.0) break;

    gamma_old = gamma;
    sigma_old = sigma;
    gamma = delta / rho1;
    sigma = beta_next / rho1;

    parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) {
        double wn = (v[i] - rho3 * w_prev[i] - rho2 * w[i]) / rho1;
        w_prev[i] = w[i];
        w[i] = wn;
        x[i] += gamma * eta * wn;
      }
    });
    eta = -sigma * eta;

    res.iterations = it;
    res.rel_residual = std::fabs(eta) / bnorm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    if (beta_next == 0.0) break;
    std::swap(v_prev, v);
    parallel_blocks(n, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) v[i] = v_next[i] / beta_next;
    });
    beta_old = beta;
    beta = beta_next;
    (void)beta_old;
  }
  return res;
}

} // namespace spikekit

#endif

#ifndef SPIKEKIT_REDUCE_HPP
#define SPIKEKIT_REDUCE_HPP

#include <cstddef>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spikekit {

// Deterministic reductions and block-parallel loops.
//
// Every sum below follows one fixed association tree: the array is cut into
// blocks of det_block elements, each block is accumulated over 8 interleaved
// lanes that are then folded pairwise, and the block sums are combined by a
// balanced pairwise tree.  The tree depends only on the array length, never
// on the number of threads, so results are bit-identical for any thread
// count (including 1).

inline constexpr std::size_t det_block = 4096;

namespace detail {

inline double block_sum(const double* x, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int k = 0; k < 8; ++k) lane[k] += x[i + k];
  for (; i < n; ++i) lane[i % 8] += x[i];
  double a = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  double b = (lane[4] + lane[5]) + (lane[6] + lane[7]);
  return a + b;
}

inline double pairwise_combine(const double* s, std::size_t n) {
  if (n == 1) return s[0];
  if (n == 2) return s[0] + s[1];
  std::size_t half = n / 2;
  return pairwise_combine(s, half) + pairwise_combine(s + half, n - half);
}

} // namespace detail

inline double det_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= det_block) return detail::block_sum(x, n);
  const std::size_t nb = (n + det_block - 1) / det_block;
  std::vector<double> partial(nb);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < (long long)nb; ++b) {
    std::size_t i0 = (std::size_t)b * det_block;
    partial[b] = detail::block_sum(x + i0, std::min(det_block, n - i0));
  }
  return detail::pairwise_combine(partial.data(), nb);
}

// max |x_i|; max is associative so any order is exact
inline double det_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
  for (long long i = 0; i < (long long)n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

inline double det_max(const double* x, std::size_t n) {
  double m = -1.0 / 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
  for (long long i = 0; i < (long long)n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

inline double det_min(const double* x, std::size_t n) {
  double m = 1.0 / 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : m)
#endif
  for (long long i = 0; i < (long long)n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

// Runs fn(i0, i1) over fixed-size index blocks, possibly in parallel.
// Block boundaries depend only on n, so any per-block vectorization
// pattern is reproduced regardless of the thread count.
template <class Fn>
inline void parallel_blocks(std::size_t n, Fn&& fn) {
  if (n == 0) return;
  const std::size_t nb = (n + det_block - 1) / det_block;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < (long long)nb; ++b) {
    std::size_t i0 = (std::size_t)b * det_block;
    fn(i0, std::min(i0 + det_block, n));
  }
}

} // namespace spikekit

#endif

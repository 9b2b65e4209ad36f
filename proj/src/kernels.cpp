#include "symplopt/kernels.hpp"

#include <cassert>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symplopt::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

double block_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

} // namespace

double dot_serial(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += block_size) {
    const std::size_t len = std::min(block_size, n - start);
    total += block_dot(a.data() + start, b.data() + start, len);
  }
  return total;
}

double dot_parallel(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  if (nblocks <= 1) return dot_serial(a, b);
  std::vector<double> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblocks); ++blk) {
    const std::size_t start = static_cast<std::size_t>(blk) * block_size;
    const std::size_t len = std::min(block_size, n - start);
    partial[static_cast<std::size_t>(blk)] = block_dot(a.data() + start, b.data() + start, len);
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() < parallel_threshold) return dot_serial(a, b);
  return dot_parallel(a, b);
}

void axpy_serial(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void axpy_parallel(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() < parallel_threshold) {
    axpy_serial(a, x, y);
  } else {
    axpy_parallel(a, x, y);
  }
}

namespace {

// Shared element expression so the serial and parallel variants are
// guaranteed bitwise identical.
inline double tridiag_element(std::span<const double> diag, std::span<const double> off,
                              std::span<const double> x, std::size_t i, std::size_t n) {
  double v = diag[i] * x[i];
  if (i > 0) v += off[i - 1] * x[i - 1];
  if (i + 1 < n) v += off[i] * x[i + 1];
  return v;
}

} // namespace

void tridiag_apply_serial(std::span<const double> diag, std::span<const double> off,
                          std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  assert(diag.size() == n && y.size() == n && (n == 0 || off.size() == n - 1));
  for (std::size_t i = 0; i < n; ++i) y[i] = tridiag_element(diag, off, x, i, n);
}

void tridiag_apply_parallel(std::span<const double> diag, std::span<const double> off,
                            std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  assert(diag.size() == n && y.size() == n && (n == 0 || off.size() == n - 1));
  const std::int64_t m = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < m; ++i)
    y[static_cast<std::size_t>(i)] = tridiag_element(diag, off, x, static_cast<std::size_t>(i), n);
}

void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y) {
  if (x.size() < parallel_threshold) {
    tridiag_apply_serial(diag, off, x, y);
  } else {
    tridiag_apply_parallel(diag, off, x, y);
  }
}

} // namespace symplopt::kernels

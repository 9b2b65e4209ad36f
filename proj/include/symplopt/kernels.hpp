#pragma once

#include <cstddef>
#include <span>

// Vector kernels with a serial reference implementation and OpenMP variants.
// The parallel dot is bitwise identical to the serial one: both sum fixed-size
// blocks independently and reduce the partials in block order, so the
// floating-point reduction tree does not depend on the thread count.

namespace symplopt::kernels {

inline constexpr std::size_t block_size = 4096;

// Element counts below this threshold always take the serial path.
inline constexpr std::size_t parallel_threshold = 32768;

bool openmp_enabled();
int max_threads();

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot_parallel(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

// y += a * x
void axpy_serial(double a, std::span<const double> x, std::span<double> y);
void axpy_parallel(double a, std::span<const double> x, std::span<double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);

// y = T x for a symmetric tridiagonal T with main diagonal `diag` (size n)
// and off-diagonal `off` (size n-1, empty when n == 1).
void tridiag_apply_serial(std::span<const double> diag, std::span<const double> off,
                          std::span<const double> x, std::span<double> y);
void tridiag_apply_parallel(std::span<const double> diag, std::span<const double> off,
                            std::span<const double> x, std::span<double> y);
void tridiag_apply(std::span<const double> diag, std::span<const double> off,
                   std::span<const double> x, std::span<double> y);

} // namespace symplopt::kernels

#pragma once

// Shared test helpers: dense oracles, a non-quadratic geometry, and a zero
// objective for free-dynamics cases.

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "symplopt/bregman.hpp"
#include "symplopt/objectives.hpp"

namespace testsupport {

// Dense correlation matrix Sigma_ij = rho^{|i-j|}.
inline std::vector<std::vector<double>> dense_kms(std::size_t d, double rho) {
  std::vector<std::vector<double>> m(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m[i][j] = std::pow(rho, std::abs(static_cast<double>(i) - static_cast<double>(j)));
  return m;
}

// Gaussian elimination with partial pivoting; the independent route for
// checking the closed-form tridiagonal inverse.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline std::vector<double> dense_matvec(const std::vector<std::vector<double>>& a,
                                        std::span<const double> x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

// h(x) = sum x_i log x_i on the positive orthant; h*(r) = sum e^{r_i - 1}.
inline symplopt::bregman::BregmanGeometry entropic_geometry() {
  symplopt::bregman::BregmanGeometry g;
  g.h = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * std::log(v);
    return s;
  };
  g.grad_h = [](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::log(x[i]) + 1.0;
  };
  g.h_star = [](std::span<const double> r) {
    double s = 0.0;
    for (double v : r) s += std::exp(v - 1.0);
    return s;
  };
  g.grad_h_star = [](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::exp(r[i] - 1.0);
  };
  g.is_quadratic = false;
  return g;
}

class ZeroObjective final : public symplopt::objectives::Objective {
public:
  explicit ZeroObjective(std::size_t dim) : Objective(dim) {}

private:
  double eval_value(std::span<const double>) const override { return 0.0; }
  void eval_gradient(std::span<const double>, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
  }
};

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t d,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(d);
  for (double& x : v) x = dist(gen);
  return v;
}

} // namespace testsupport

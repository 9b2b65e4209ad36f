#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace symplopt::objectives {

// Objective with built-in evaluation counters. The gradient counter is the
// currency of the benchmark: integrators report cost in fresh gradient
// evaluations, so every gradient() call counts exactly once and cached reuse
// must bypass this interface entirely. Counters are not synchronized; each
// concurrent run owns its own instance.
class Objective {
public:
  virtual ~Objective() = default;

  std::size_t dim() const { return dim_; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;

  std::uint64_t value_evals() const { return value_count_; }
  std::uint64_t grad_evals() const { return grad_count_; }
  void reset_counters() const;

protected:
  explicit Objective(std::size_t dim) : dim_(dim) {}

private:
  virtual double eval_value(std::span<const double> x) const = 0;
  virtual void eval_gradient(std::span<const double> x, std::span<double> g) const = 0;

  std::size_t dim_;
  mutable std::uint64_t value_count_ = 0;
  mutable std::uint64_t grad_count_ = 0;
};

// f(x) = <Sigma^{-1} x, x> for the correlation matrix Sigma_ij = rho^{|i-j|}.
// Sigma^{-1} is tridiagonal in closed form, so evaluation is O(d).
// Throws std::invalid_argument for dim == 0 or |rho| >= 1.
std::unique_ptr<Objective> build_correlated_quadratic(std::size_t dim, double rho);

// f(x) = <x, x>^2
std::unique_ptr<Objective> quartic(std::size_t dim);

// Max over coordinates of |central difference - analytic| / (1 + |analytic|)
// at step h. Uses value() calls for the differences.
double check_gradient(const Objective& obj, std::span<const double> x, double h);

} // namespace symplopt::objectives

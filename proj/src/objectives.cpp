#include "symplopt/objectives.hpp"

#include <cmath>
#include <stdexcept>

#include "symplopt/kernels.hpp"

namespace symplopt::objectives {

double Objective::value(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("objective: dimension mismatch in value()");
  ++value_count_;
  return eval_value(x);
}

void Objective::gradient(std::span<const double> x, std::span<double> g) const {
  if (x.size() != dim_ || g.size() != dim_)
    throw std::invalid_argument("objective: dimension mismatch in gradient()");
  ++grad_count_;
  eval_gradient(x, g);
}

void Objective::reset_counters() const {
  value_count_ = 0;
  grad_count_ = 0;
}

namespace {

// f(x) = <Sigma^{-1} x, x> with Sigma_ij = rho^{|i-j|}. The inverse is
// tridiagonal: 1/(1-rho^2) at both ends, (1+rho^2)/(1-rho^2) inside,
// -rho/(1-rho^2) off the diagonal; for d = 1 it degenerates to [1].
class CorrelatedQuadratic final : public Objective {
public:
  CorrelatedQuadratic(std::size_t dim, double rho) : Objective(dim), diag_(dim) {
    if (dim == 1) {
      diag_[0] = 1.0;
    } else {
      const double denom = 1.0 - rho * rho;
      const double end = 1.0 / denom;
      const double interior = (1.0 + rho * rho) / denom;
      for (std::size_t i = 0; i < dim; ++i) diag_[i] = interior;
      diag_.front() = end;
      diag_.back() = end;
      off_.assign(dim - 1, -rho / denom);
    }
  }

private:
  double eval_value(std::span<const double> x) const override {
    std::vector<double> y(x.size());
    kernels::tridiag_apply(diag_, off_, x, y);
    return kernels::dot(y, x);
  }

  void eval_gradient(std::span<const double> x, std::span<double> g) const override {
    kernels::tridiag_apply(diag_, off_, x, g);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 2.0;
  }

  std::vector<double> diag_;
  std::vector<double> off_;
};

class Quartic final : public Objective {
public:
  explicit Quartic(std::size_t dim) : Objective(dim) {}

private:
  double eval_value(std::span<const double> x) const override {
    const double s = kernels::dot(x, x);
    return s * s;
  }

  void eval_gradient(std::span<const double> x, std::span<double> g) const override {
    const double s = kernels::dot(x, x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 4.0 * s * x[i];
  }
};

} // namespace

std::unique_ptr<Objective> build_correlated_quadratic(std::size_t dim, double rho) {
  if (dim == 0) throw std::invalid_argument("correlated quadratic: dim must be positive");
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("correlated quadratic: |rho| must be below 1");
  return std::make_unique<CorrelatedQuadratic>(dim, rho);
}

std::unique_ptr<Objective> quartic(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("quartic: dim must be positive");
  return std::make_unique<Quartic>(dim);
}

double check_gradient(const Objective& obj, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("check_gradient: h must be positive");
  const std::size_t d = obj.dim();
  std::vector<double> g(d);
  obj.gradient(x, g);
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = obj.value(probe);
    probe[i] = xi - h;
    const double fm = obj.value(probe);
    probe[i] = xi;
    const double central = (fp - fm) / (2.0 * h);
    const double err = std::abs(central - g[i]) / (1.0 + std::abs(g[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

} // namespace symplopt::objectives

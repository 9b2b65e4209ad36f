#include "symplopt/bregman.hpp"

#include <cmath>
#include <stdexcept>

#include "symplopt/kernels.hpp"

namespace symplopt::bregman {

namespace {

void require_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("bregman: t must be positive");
}

void require_same_dim(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string("bregman: dimension mismatch in ") + what);
}

} // namespace

BregmanGeometry quadratic_geometry() {
  BregmanGeometry g;
  g.h = [](std::span<const double> x) { return 0.5 * kernels::dot(x, x); };
  g.grad_h = [](std::span<const double> x, std::span<double> out) {
    std::copy(x.begin(), x.end(), out.begin());
  };
  g.h_star = [](std::span<const double> r) { return 0.5 * kernels::dot(r, r); };
  g.grad_h_star = [](std::span<const double> r, std::span<double> out) {
    std::copy(r.begin(), r.end(), out.begin());
  };
  g.is_quadratic = true;
  return g;
}

double bregman_divergence(const BregmanGeometry& geom,
                          std::span<const double> y, std::span<const double> x) {
  require_same_dim(y, x, "bregman_divergence");
  const std::size_t d = x.size();
  std::vector<double> gx(d);
  geom.grad_h(x, gx);
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = y[i] - x[i];
  return geom.h(y) - geom.h(x) - kernels::dot(gx, diff);
}

double kinetic_energy(const BregmanGeometry& geom,
                      std::span<const double> x, std::span<const double> v,
                      double t, const scaling::ScalingParams& params) {
  require_same_dim(x, v, "kinetic_energy");
  require_time(t);
  const auto s = scaling::eval_scaling(params, t);
  const double scale = std::exp(-s.alpha);
  std::vector<double> y(x.begin(), x.end());
  kernels::axpy(scale, v, y);
  return bregman_divergence(geom, y, x);
}

double lagrangian(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> v,
                  double t, const scaling::ScalingParams& params,
                  const objectives::Objective& objective) {
  require_time(t);
  const auto s = scaling::eval_scaling(params, t);
  const double k = kinetic_energy(geom, x, v, t, params);
  return std::exp(s.alpha + s.gamma) * (k - std::exp(s.beta) * objective.value(x));
}

void momentum_map(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> v,
                  double t, const scaling::ScalingParams& params,
                  std::span<double> r_out) {
  require_same_dim(x, v, "momentum_map");
  require_same_dim(x, r_out, "momentum_map");
  require_time(t);
  const auto s = scaling::eval_scaling(params, t);
  const std::size_t d = x.size();
  std::vector<double> shifted(x.begin(), x.end());
  kernels::axpy(std::exp(-s.alpha), v, shifted);
  std::vector<double> g_shifted(d), g_base(d);
  geom.grad_h(shifted, g_shifted);
  geom.grad_h(x, g_base);
  const double eg = std::exp(s.gamma);
  for (std::size_t i = 0; i < d; ++i) r_out[i] = eg * (g_shifted[i] - g_base[i]);
}

void velocity_map(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> r,
                  double t, const scaling::ScalingParams& params,
                  std::span<double> v_out) {
  require_same_dim(x, r, "velocity_map");
  require_same_dim(x, v_out, "velocity_map");
  require_time(t);
  const auto s = scaling::eval_scaling(params, t);
  const std::size_t d = x.size();
  std::vector<double> u(d);
  geom.grad_h(x, u);
  kernels::axpy(std::exp(-s.gamma), r, u);
  std::vector<double> back(d);
  geom.grad_h_star(u, back);
  const double ea = std::exp(s.alpha);
  for (std::size_t i = 0; i < d; ++i) v_out[i] = ea * (back[i] - x[i]);
}

double hamiltonian(const BregmanGeometry& geom,
                   std::span<const double> x, std::span<const double> r,
                   double t, const scaling::ScalingParams& params,
                   const objectives::Objective& objective) {
  require_same_dim(x, r, "hamiltonian");
  require_time(t);
  const auto s = scaling::eval_scaling(params, t);
  const std::size_t d = x.size();
  // D_{h*}(u, s0) with u = e^{-gamma} r + grad_h(x) and s0 = grad_h(x)
  std::vector<double> s0(d);
  geom.grad_h(x, s0);
  std::vector<double> u(s0.begin(), s0.end());
  kernels::axpy(std::exp(-s.gamma), r, u);
  std::vector<double> gs0(d);
  geom.grad_h_star(s0, gs0);
  std::vector<double> du(d);
  for (std::size_t i = 0; i < d; ++i) du[i] = u[i] - s0[i];
  const double div = geom.h_star(u) - geom.h_star(s0) - kernels::dot(gs0, du);
  return std::exp(s.alpha + s.gamma) * (div + std::exp(s.beta) * objective.value(x));
}

} // namespace symplopt::bregman

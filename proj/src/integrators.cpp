#include "symplopt/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symplopt/kernels.hpp"

namespace symplopt::integrators {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Kinetic part of the Hamiltonian, e^{alpha+gamma} D_{h*}(e^{-gamma} r + grad_h(x), grad_h(x)).
// The B1 component field is its negative x-gradient.
double hamiltonian_kinetic(const bregman::BregmanGeometry& geom,
                           std::span<const double> x, std::span<const double> r,
                           double t, const scaling::ScalingParams& params) {
  const auto s = scaling::eval_scaling(params, t);
  const std::size_t d = x.size();
  std::vector<double> s0(d);
  geom.grad_h(x, s0);
  std::vector<double> u(s0.begin(), s0.end());
  kernels::axpy(std::exp(-s.gamma), r, u);
  std::vector<double> gs0(d);
  geom.grad_h_star(s0, gs0);
  std::vector<double> du(d);
  for (std::size_t i = 0; i < d; ++i) du[i] = u[i] - s0[i];
  const double div = geom.h_star(u) - geom.h_star(s0) - kernels::dot(gs0, du);
  return std::exp(s.alpha + s.gamma) * div;
}

} // namespace

ExtendedState init_state(std::span<const double> x0, double t0,
                         const objectives::Objective& objective,
                         const bregman::BregmanGeometry& geom,
                         const scaling::ScalingParams& params) {
  scaling::validate(params);
  if (!(t0 > 0.0)) throw std::domain_error("init_state: t0 must be positive");
  if (x0.size() != objective.dim())
    throw std::invalid_argument("init_state: x0 dimension does not match the objective");
  ExtendedState st;
  st.x.assign(x0.begin(), x0.end());
  st.r.assign(x0.size(), 0.0);
  st.t = t0;
  st.E = -bregman::hamiltonian(geom, st.x, st.r, t0, params, objective);
  return st;
}

void flow_A(ExtendedState& state, double dt) {
  const double t = state.t + dt;
  if (!(t > 0.0)) throw std::domain_error("flow_A: time left the positive axis");
  state.t = t;
}

void flow_C1(ExtendedState& state, double dt,
             const objectives::Objective& objective,
             const scaling::ScalingParams& params,
             std::span<const double> cached_grad) {
  const double kick = scaling::coeff_kick(params, state.t);
  std::vector<double> fresh;
  std::span<const double> g = cached_grad;
  if (g.empty()) {
    fresh.resize(state.x.size());
    objective.gradient(state.x, fresh);
    g = fresh;
  }
  if (!all_finite(g)) state.diverged = true;
  kernels::axpy(-dt * kick, g, state.r);
}

void flow_B3_quadratic(ExtendedState& state, double dt,
                       const scaling::ScalingParams& params) {
  const double drift = scaling::coeff_drift(params, state.t);
  kernels::axpy(dt * drift, state.r, state.x);
}

void flow_B2_C2(ExtendedState& state, double dt,
                const objectives::Objective& objective,
                const scaling::ScalingParams& params) {
  const double wr = scaling::coeff_energy_momentum(params, state.t);
  const double wf = scaling::coeff_energy_potential(params, state.t);
  state.E += dt * (wr * kernels::dot(state.r, state.r) - wf * objective.value(state.x));
}

int solve_component_flow_fixed_point(ExtendedState& state, double dt,
                                     const bregman::BregmanGeometry& geom,
                                     const scaling::ScalingParams& params,
                                     ComponentFlow which,
                                     double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("fixed-point solver: tol must be positive");
  const std::size_t d = state.x.size();
  const double t = state.t;

  // Field of the moving variable, evaluated at the midpoint iterate.
  auto field = [&](std::span<const double> mid, std::span<double> out) {
    if (which == ComponentFlow::B3) {
      bregman::velocity_map(geom, mid, state.r, t, params, out);
      return;
    }
    // B1: out = -dH_kin/dx evaluated at (x, mid, t). Zero for the quadratic
    // geometry; central finite differences otherwise (the geometry interface
    // carries no second derivatives). The step must stay well above 1e-6:
    // cancellation noise in the difference quotient scales as 1/h and has to
    // sit below the fixed-point tolerance or the iteration never settles.
    if (geom.is_quadratic) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::vector<double> probe(state.x.begin(), state.x.end());
    for (std::size_t i = 0; i < d; ++i) {
      const double h = 1e-4 * (1.0 + std::abs(probe[i]));
      const double xi = probe[i];
      probe[i] = xi + h;
      const double hp = hamiltonian_kinetic(geom, probe, mid, t, params);
      probe[i] = xi - h;
      const double hm = hamiltonian_kinetic(geom, probe, mid, t, params);
      probe[i] = xi;
      out[i] = -(hp - hm) / (2.0 * h);
    }
  };

  std::vector<double>& moving = (which == ComponentFlow::B3) ? state.x : state.r;
  const std::vector<double> base = moving;
  std::vector<double> cur = base;
  std::vector<double> mid(d), f(d), nxt(d);

  int iters = 0;
  for (;;) {
    for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (base[i] + cur[i]);
    field(mid, f);
    double delta = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      nxt[i] = base[i] + dt * f[i];
      delta = std::max(delta, std::abs(nxt[i] - cur[i]));
    }
    cur = nxt;
    if (delta < tol) break;
    if (++iters > max_iter) {
      std::ostringstream msg;
      msg << "fixed-point solver: no convergence after " << max_iter
          << " iterations; residual " << delta;
      throw std::runtime_error(msg.str());
    }
  }
  moving = cur;
  return iters;
}

namespace {

void step_impl(ExtendedState& state, const LeapfrogConfig& config,
               const objectives::Objective& objective,
               const bregman::BregmanGeometry& geom,
               StepCache* cache, bool gradient_flow) {
  scaling::validate(config.params);
  const std::size_t d = state.x.size();
  if (objective.dim() != d)
    throw std::invalid_argument("leapfrog_step: state and objective dimensions differ");
  if (state.r.size() != d)
    throw std::invalid_argument("leapfrog_step: momentum dimension differs from position");
  if (gradient_flow && !geom.is_quadratic)
    throw std::invalid_argument("gradient flow requires the quadratic geometry");

  const double eps = config.epsilon;
  const auto& P = config.params;

  flow_A(state, 0.5 * eps);
  if (config.track_energy) flow_B2_C2(state, 0.5 * eps, objective, P);

  // Leading kick. Reuses the previous step's trailing gradient when a cache
  // is present (x has not moved since); the gradient-flow variant always
  // evaluates fresh and shares the result with the drift below.
  std::vector<double> lead(d);
  std::span<const double> lead_grad;
  if (!gradient_flow && cache && cache->valid) {
    lead_grad = cache->grad;
  } else {
    objective.gradient(state.x, lead);
    lead_grad = lead;
  }
  flow_C1(state, 0.5 * eps, objective, P, lead_grad);

  if (!geom.is_quadratic)
    solve_component_flow_fixed_point(state, 0.5 * eps, geom, P, ComponentFlow::B1);

  if (gradient_flow) {
    flow_B3_quadratic(state, eps, P);
    const double coeff = P.p * std::pow(eps, P.p) / (2.0 * config.gradient_flow_N);
    std::span<const double> gf_grad = lead_grad;
    if (config.gradient_flow_lagged && cache && cache->gf_prev_valid)
      gf_grad = cache->gf_prev;
    kernels::axpy(-coeff, gf_grad, state.x);
    if (cache) {
      cache->gf_prev.assign(lead_grad.begin(), lead_grad.end());
      cache->gf_prev_valid = true;
    }
  } else if (geom.is_quadratic) {
    flow_B3_quadratic(state, eps, P);
  } else {
    solve_component_flow_fixed_point(state, eps, geom, P, ComponentFlow::B3);
  }

  if (!geom.is_quadratic)
    solve_component_flow_fixed_point(state, 0.5 * eps, geom, P, ComponentFlow::B1);

  // Trailing kick, always fresh at the new position.
  std::vector<double> trail(d);
  objective.gradient(state.x, trail);
  flow_C1(state, 0.5 * eps, objective, P, trail);
  if (cache) {
    if (gradient_flow) {
      cache->valid = false; // the next leading gradient must be fresh too
    } else {
      cache->grad = std::move(trail);
      cache->valid = true;
    }
  }

  if (config.track_energy) flow_B2_C2(state, 0.5 * eps, objective, P);
  flow_A(state, 0.5 * eps);

  state.step_index += 1;
  state.tau += eps;
  if (!all_finite(state.x) || !all_finite(state.r) ||
      !std::isfinite(state.t) || !std::isfinite(state.E))
    state.diverged = true;
}

} // namespace

void leapfrog_step(ExtendedState& state, const LeapfrogConfig& config,
                   const objectives::Objective& objective,
                   const bregman::BregmanGeometry& geom,
                   StepCache* cache) {
  step_impl(state, config, objective, geom, cache, false);
}

void leapfrog_step_gradient_flow(ExtendedState& state, const LeapfrogConfig& config,
                                 const objectives::Objective& objective,
                                 const bregman::BregmanGeometry& geom,
                                 StepCache* cache) {
  if (!config.gradient_flow_enabled)
    throw std::invalid_argument("leapfrog_step_gradient_flow: gradient_flow_enabled is off");
  step_impl(state, config, objective, geom, cache, true);
}

double conserved_quantity(const ExtendedState& state,
                          const objectives::Objective& objective,
                          const bregman::BregmanGeometry& geom,
                          const scaling::ScalingParams& params) {
  return bregman::hamiltonian(geom, state.x, state.r, state.t, params, objective) + state.E;
}

double symplecticity_check(const ExtendedState& state, const LeapfrogConfig& config,
                           const objectives::Objective& objective,
                           const bregman::BregmanGeometry& geom,
                           double fd_step) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("symplecticity_check: fd_step must be positive");
  const std::size_t d = state.x.size();
  const std::size_t m = 2 * d + 2; // coordinates (x, t, r, E)

  auto pack = [&](const ExtendedState& s, std::vector<double>& z) {
    for (std::size_t i = 0; i < d; ++i) z[i] = s.x[i];
    z[d] = s.t;
    for (std::size_t i = 0; i < d; ++i) z[d + 1 + i] = s.r[i];
    z[2 * d + 1] = s.E;
  };
  auto unpack = [&](const std::vector<double>& z) {
    ExtendedState s = state;
    for (std::size_t i = 0; i < d; ++i) s.x[i] = z[i];
    s.t = z[d];
    for (std::size_t i = 0; i < d; ++i) s.r[i] = z[d + 1 + i];
    s.E = z[2 * d + 1];
    s.diverged = false;
    return s;
  };

  // E is part of the checked coordinates, so its dynamics must be on.
  LeapfrogConfig cfg = config;
  cfg.track_energy = true;

  std::vector<double> z0(m);
  pack(state, z0);

  std::vector<double> jac(m * m); // jac[i*m + j] = d z_i' / d z_j
  std::vector<double> zp(m), zm(m);
  for (std::size_t j = 0; j < m; ++j) {
    zp = z0;
    zm = z0;
    zp[j] += fd_step;
    zm[j] -= fd_step;
    ExtendedState sp = unpack(zp);
    ExtendedState sm = unpack(zm);
    if (cfg.gradient_flow_enabled) {
      leapfrog_step_gradient_flow(sp, cfg, objective, geom, nullptr);
      leapfrog_step_gradient_flow(sm, cfg, objective, geom, nullptr);
    } else {
      leapfrog_step(sp, cfg, objective, geom, nullptr);
      leapfrog_step(sm, cfg, objective, geom, nullptr);
    }
    std::vector<double> fp(m), fm(m);
    pack(sp, fp);
    pack(sm, fm);
    for (std::size_t i = 0; i < m; ++i)
      jac[i * m + j] = (fp[i] - fm[i]) / (2.0 * fd_step);
  }

  // Omega pairs q = (x, t) with p = (r, E): Omega[i][q + i] = 1, antisymmetric.
  const std::size_t q = d + 1;
  auto omega = [&](std::size_t i, std::size_t j) -> double {
    if (j == i + q && i < q) return 1.0;
    if (i == j + q && j < q) return -1.0;
    return 0.0;
  };

  double worst = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      // (J^T Omega J)_{ab} = sum_i J_{ia} (Omega J)_{ib}; Omega has one entry per row.
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double oj = 0.0;
        if (i < q) {
          oj = jac[(i + q) * m + b];
        } else if (i >= q) {
          oj = -jac[(i - q) * m + b];
        }
        acc += jac[i * m + a] * oj;
      }
      worst = std::max(worst, std::abs(acc - omega(a, b)));
    }
  }
  return worst;
}

} // namespace symplopt::integrators

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symplopt/bregman.hpp"
#include "symplopt/objectives.hpp"
#include "symplopt/scaling.hpp"

// Extended phase space (x, t, r, E), the component flows of the splitting,
// the symmetric leapfrog composition, its gradient-flow-augmented variant,
// a fixed-point solver for non-quadratic geometries, and the conservation
// and symplecticity diagnostics.

namespace symplopt::integrators {

struct ExtendedState {
  std::vector<double> x;
  std::vector<double> r;
  double t = 1.0;   // explicit time, must stay positive
  double E = 0.0;   // energy conjugate to t
  double tau = 0.0; // effective time elapsed
  std::uint64_t step_index = 0;
  bool diverged = false;
};

struct LeapfrogConfig {
  double epsilon = 0.1;
  scaling::ScalingParams params;
  bool gradient_flow_enabled = false;
  double gradient_flow_N = 2.0;
  // Compatibility switch: use the previous step's gradient in the
  // gradient-flow displacement (falls back to the current one on step 0).
  bool gradient_flow_lagged = false;
  bool track_energy = true;
};

// Cross-step gradient cache. The trailing kick's gradient stays valid for the
// next step's leading kick because x does not move in between; the flag is
// cleared whenever x changes. Steps run without a cache simply evaluate twice.
struct StepCache {
  std::vector<double> grad;
  bool valid = false;
  std::vector<double> gf_prev; // previous leading gradient, lagged GF mode
  bool gf_prev_valid = false;
};

// x = x0, t = t0, r = 0, E = -H(x0, 0, t0), tau = 0, step_index = 0, so the
// conserved diagnostic H + E starts at exactly zero.
// Throws std::domain_error for t0 <= 0, std::invalid_argument on dim mismatch.
ExtendedState init_state(std::span<const double> x0, double t0,
                         const objectives::Objective& objective,
                         const bregman::BregmanGeometry& geom,
                         const scaling::ScalingParams& params);

// t += dt. Throws std::domain_error if the resulting t <= 0.
void flow_A(ExtendedState& state, double dt);

// r -= dt * C p t^{2p-1} * grad f(x). Uses cached_grad when supplied (must be
// grad f at the current x); evaluates exactly one fresh gradient otherwise.
// A non-finite gradient marks the state diverged.
void flow_C1(ExtendedState& state, double dt,
             const objectives::Objective& objective,
             const scaling::ScalingParams& params,
             std::span<const double> cached_grad = {});

// x += dt * (p / t^{p+1}) * r. Quadratic-geometry closed form.
void flow_B3_quadratic(ExtendedState& state, double dt,
                       const scaling::ScalingParams& params);

// E += dt * ( 1/2 p(p+1)/t^{p+2} <r,r> - C p(2p-1) t^{2p-2} f(x) ).
// Pure diagnostic: E never feeds back into x, r, t.
void flow_B2_C2(ExtendedState& state, double dt,
                const objectives::Objective& objective,
                const scaling::ScalingParams& params);

enum class ComponentFlow { B1, B3 };

// Implicit midpoint flow of the chosen component field, solved by fixed-point
// iteration on the updated variable (B3 moves x, B1 moves r). Returns the
// number of corrections applied before successive iterates differed by less
// than tol in max norm: a zero field reports 0, a state-independent field 1.
// Throws std::runtime_error (with the residual) if max_iter is exhausted.
int solve_component_flow_fixed_point(ExtendedState& state, double dt,
                                     const bregman::BregmanGeometry& geom,
                                     const scaling::ScalingParams& params,
                                     ComponentFlow which,
                                     double tol = 1e-12, int max_iter = 50);

// One step of the symmetric composition
//   A(e/2) B2C2(e/2) C1(e/2) B1(e/2) B3(e) B1(e/2) C1(e/2) B2C2(e/2) A(e/2),
// with every inner update evaluated at t_h = t_n + e/2. B1 is the identity and
// B3 has a closed form for the quadratic geometry; otherwise both go through
// the fixed-point solver. With a persistent cache this costs one fresh
// gradient per step after the first.
void leapfrog_step(ExtendedState& state, const LeapfrogConfig& config,
                   const objectives::Objective& objective,
                   const bregman::BregmanGeometry& geom,
                   StepCache* cache = nullptr);

// As leapfrog_step, but the central drift becomes the explicit update
//   x += e (p/t^{p+1}) r - (p e^p / 2N) grad f(x_before_drift),
// composing the (non-Hamiltonian) gradient-flow field into the central
// operator. Costs exactly two fresh gradients per step: the leading kick and
// the drift share one, the trailing kick takes the other. Quadratic geometry
// only; throws std::invalid_argument otherwise.
void leapfrog_step_gradient_flow(ExtendedState& state, const LeapfrogConfig& config,
                                 const objectives::Objective& objective,
                                 const bregman::BregmanGeometry& geom,
                                 StepCache* cache = nullptr);

// H(x, r, t) + E; constant along the exact extended dynamics, oscillates with
// bounded O(e^2) drift under the leapfrog.
double conserved_quantity(const ExtendedState& state,
                          const objectives::Objective& objective,
                          const bregman::BregmanGeometry& geom,
                          const scaling::ScalingParams& params);

// Max-norm of J^T Omega J - Omega for the Jacobian J of one step (the
// gradient-flow variant when enabled), taken by central finite differences in
// the extended coordinates (x, t, r, E); Omega pairs (x, t) with (r, E).
double symplecticity_check(const ExtendedState& state, const LeapfrogConfig& config,
                           const objectives::Objective& objective,
                           const bregman::BregmanGeometry& geom,
                           double fd_step);

} // namespace symplopt::integrators

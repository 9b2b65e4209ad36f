#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symplopt/objectives.hpp"
#include "symplopt/scaling.hpp"
#include "symplopt/trace.hpp"

// Generalized Nesterov three-sequence discretization, the comparison baseline.
// Uses the same objective counters as the integrators, so gradient costs are
// directly comparable.

namespace symplopt::baselines {

struct NesterovState {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::uint64_t n = 0;
};

struct NesterovConfig {
  double epsilon = 0.1;
  scaling::ScalingParams params;
  double N = 2.0; // Taylor-step constant in the y-update coefficient p e^p / 2N
};

// x = y = z = x0, n = 0.
NesterovState nesterov_init(std::span<const double> x0);

// x_{n+1} = (p/(n+1)) z_n + (1 - p/(n+1)) y_n          (no clamping: the
//           coefficient 1 - p/(n+1) is genuinely negative at early n)
// y_{n+1} = x_{n+1} - (p e^p / 2N) grad f(x_{n+1})
// z_{n+1} = z_n - e^p C p (n+1)^{p-1} grad f(y_{n+1})
// Exactly two fresh gradient evaluations.
void nesterov_step(NesterovState& state, const NesterovConfig& config,
                   const objectives::Objective& objective);

// Iterates nesterov_step, recording f(x_n) with model time t0 + n epsilon.
// Divergence (f above threshold, or any non-finite value) is a recorded
// outcome, not an error: the run halts and the last row carries the flag.
// Throws std::invalid_argument for steps < 1.
Trace nesterov_run(std::span<const double> x0, const NesterovConfig& config,
                   const objectives::Objective& objective,
                   std::uint64_t steps, double divergence_threshold,
                   std::uint64_t record_every = 1, double t0 = 1.0);

} // namespace symplopt::baselines

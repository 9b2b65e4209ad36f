#include "symplopt/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "symplopt/kernels.hpp"

namespace symplopt::baselines {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

NesterovState nesterov_init(std::span<const double> x0) {
  NesterovState st;
  st.x.assign(x0.begin(), x0.end());
  st.y = st.x;
  st.z = st.x;
  return st;
}

void nesterov_step(NesterovState& state, const NesterovConfig& config,
                   const objectives::Objective& objective) {
  scaling::validate(config.params);
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("nesterov_step: epsilon must be positive");
  if (!(config.N > 0.0)) throw std::invalid_argument("nesterov_step: N must be positive");
  const std::size_t d = state.x.size();
  if (objective.dim() != d)
    throw std::invalid_argument("nesterov_step: state and objective dimensions differ");

  const double p = config.params.p;
  const double C = config.params.C;
  const double eps_p = std::pow(config.epsilon, p);
  const double k = static_cast<double>(state.n) + 1.0;
  const double a = p / k; // 1 - a is genuinely negative at early n; no clamping

  for (std::size_t i = 0; i < d; ++i) state.x[i] = a * state.z[i] + (1.0 - a) * state.y[i];

  std::vector<double> g(d);
  objective.gradient(state.x, g);
  const double taylor = p * eps_p / (2.0 * config.N);
  state.y = state.x;
  kernels::axpy(-taylor, g, state.y);

  objective.gradient(state.y, g);
  const double zcoeff = eps_p * C * p * std::pow(k, p - 1.0);
  kernels::axpy(-zcoeff, g, state.z);

  state.n += 1;
}

Trace nesterov_run(std::span<const double> x0, const NesterovConfig& config,
                   const objectives::Objective& objective,
                   std::uint64_t steps, double divergence_threshold,
                   std::uint64_t record_every, double t0) {
  if (steps < 1) throw std::invalid_argument("nesterov_run: steps must be at least 1");
  if (record_every < 1) throw std::invalid_argument("nesterov_run: record_every must be at least 1");

  NesterovState st = nesterov_init(x0);
  Trace trace;
  trace.records.push_back({0, t0, objective.value(st.x), objective.grad_evals(), std::nullopt, false});

  for (std::uint64_t k = 1; k <= steps; ++k) {
    nesterov_step(st, config, objective);
    const double f = objective.value(st.x);
    const bool bad = !std::isfinite(f) || f > divergence_threshold ||
                     !all_finite(st.x) || !all_finite(st.y) || !all_finite(st.z);
    const bool due = (k % record_every == 0) || k == steps || bad;
    if (due) {
      trace.records.push_back({k, t0 + static_cast<double>(k) * config.epsilon, f,
                               objective.grad_evals(), std::nullopt, bad});
    }
    if (bad) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

} // namespace symplopt::baselines

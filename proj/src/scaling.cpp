#include "symplopt/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace symplopt::scaling {

void validate(const ScalingParams& params) {
  if (!(params.p > 0.0)) throw std::invalid_argument("scaling: p must be positive");
  if (!(params.C > 0.0)) throw std::invalid_argument("scaling: C must be positive");
}

namespace {

void require_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("scaling: t must be positive");
}

} // namespace

ScalingValues eval_scaling(const ScalingParams& params, double t) {
  validate(params);
  require_time(t);
  const double logt = std::log(t);
  ScalingValues v{};
  v.alpha = std::log(params.p) - logt;
  v.beta = params.p * logt + std::log(params.C);
  v.gamma = params.p * logt;
  v.dalpha = -1.0 / t;
  v.dbeta = params.p / t;
  v.dgamma = params.p / t;
  return v;
}

double coeff_drift(const ScalingParams& params, double t) {
  validate(params);
  require_time(t);
  // exp(alpha - gamma) = p / t^{p+1}
  return std::exp(std::log(params.p) - (params.p + 1.0) * std::log(t));
}

double coeff_kick(const ScalingParams& params, double t) {
  validate(params);
  require_time(t);
  // exp(alpha + beta + gamma) = C p t^{2p-1}
  return std::exp(std::log(params.C) + std::log(params.p) + (2.0 * params.p - 1.0) * std::log(t));
}

double coeff_energy_momentum(const ScalingParams& params, double t) {
  validate(params);
  require_time(t);
  return 0.5 * params.p * (params.p + 1.0) * std::exp(-(params.p + 2.0) * std::log(t));
}

double coeff_energy_potential(const ScalingParams& params, double t) {
  validate(params);
  require_time(t);
  return params.C * params.p * (2.0 * params.p - 1.0) * std::exp((2.0 * params.p - 2.0) * std::log(t));
}

} // namespace symplopt::scaling

#pragma once

// Ideal-scaling functions alpha(t) = log p - log t, beta(t) = p log t + log C,
// gamma(t) = p log t, their time derivatives, and the coefficient combinations
// the integrator needs. Everything is computed in log space and exponentiated
// once, so large p or t cannot overflow intermediate powers.

namespace symplopt::scaling {

struct ScalingParams {
  double p = 2.0;
  double C = 1.0;
};

struct ScalingValues {
  double alpha;
  double beta;
  double gamma;
  double dalpha; // d alpha / dt = -1/t
  double dbeta;  // d beta / dt  = p/t
  double dgamma; // d gamma / dt = p/t
};

// Throws std::invalid_argument unless p > 0 and C > 0.
void validate(const ScalingParams& params);

// Throws std::domain_error unless t > 0.
ScalingValues eval_scaling(const ScalingParams& params, double t);

// exp(alpha - gamma) = p / t^{p+1}
double coeff_drift(const ScalingParams& params, double t);

// exp(alpha + beta + gamma) = C p t^{2p-1}
double coeff_kick(const ScalingParams& params, double t);

// 1/2 p (p+1) / t^{p+2}, the <r,r> coefficient of the energy update
double coeff_energy_momentum(const ScalingParams& params, double t);

// C p (2p-1) t^{2p-2}, the f(x) coefficient of the energy update
double coeff_energy_potential(const ScalingParams& params, double t);

} // namespace symplopt::scaling

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "symplopt/objectives.hpp"
#include "symplopt/scaling.hpp"

// Bregman geometry (h, h*, their gradients), the divergence, the Lagrangian
// and Hamiltonian built on it, and the Legendre maps between velocity and
// momentum. Non-quadratic geometries supply all four callables; no symbolic
// conjugation is attempted.

namespace symplopt::bregman {

struct BregmanGeometry {
  std::function<double(std::span<const double>)> h;
  std::function<void(std::span<const double>, std::span<double>)> grad_h;
  std::function<double(std::span<const double>)> h_star;
  std::function<void(std::span<const double>, std::span<double>)> grad_h_star;
  // Marks availability of closed-form component flows in the integrator.
  bool is_quadratic = false;
};

// h(x) = 1/2 <x,x>, self-dual. This normalization (rather than <x,x>) is the
// one whose Hamiltonian reduces to 1/2 e^{alpha-gamma} <r,r> + e^{alpha+beta+gamma} f.
BregmanGeometry quadratic_geometry();

// D_h(y, x) = h(y) - h(x) - <grad_h(x), y - x>; nonnegative for convex h.
// Throws std::invalid_argument on dimension mismatch.
double bregman_divergence(const BregmanGeometry& geom,
                          std::span<const double> y, std::span<const double> x);

// D_h(x + e^{-alpha(t)} v, x)
double kinetic_energy(const BregmanGeometry& geom,
                      std::span<const double> x, std::span<const double> v,
                      double t, const scaling::ScalingParams& params);

// e^{alpha+gamma} (K(x, v, t) - e^{beta} f(x))
double lagrangian(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> v,
                  double t, const scaling::ScalingParams& params,
                  const objectives::Objective& objective);

// r = e^{gamma} (grad_h(x + e^{-alpha} v) - grad_h(x))
void momentum_map(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> v,
                  double t, const scaling::ScalingParams& params,
                  std::span<double> r_out);

// v = e^{alpha} (grad_h_star(e^{-gamma} r + grad_h(x)) - x), the inverse of
// momentum_map for strictly convex h (verified by the round-trip property).
void velocity_map(const BregmanGeometry& geom,
                  std::span<const double> x, std::span<const double> r,
                  double t, const scaling::ScalingParams& params,
                  std::span<double> v_out);

// e^{alpha+gamma} ( D_{h*}(e^{-gamma} r + grad_h(x), grad_h(x)) + e^{beta} f(x) )
double hamiltonian(const BregmanGeometry& geom,
                   std::span<const double> x, std::span<const double> r,
                   double t, const scaling::ScalingParams& params,
                   const objectives::Objective& objective);

} // namespace symplopt::bregman

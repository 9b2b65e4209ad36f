#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symplopt/trace.hpp"

// Experiment orchestration: configuration, runs, rate estimation, method
// comparison, CSV and SVG emission. Everything here is deterministic for a
// fixed config and seed, down to the emitted bytes.

namespace symplopt::harness {

enum class Method { leapfrog, leapfrog_gf, nesterov };
enum class ObjectiveKind { quadratic, quartic };
enum class Axes { loglog, semilog };

struct ExperimentConfig {
  Method method = Method::leapfrog;
  ObjectiveKind objective = ObjectiveKind::quadratic;
  std::size_t dim = 50;
  double rho = 0.9;
  double p = 2.0;
  double C = 0.0625;
  double N = 2.0;
  double epsilon = 0.1;
  std::uint64_t steps = 10000;
  double t0 = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> x0; // empty: draw from seed (unit-norm standard normal)
  double divergence_threshold = 1e10;
  std::uint64_t record_every = 1;
  std::string out;
};

std::string method_name(Method m);
std::string objective_name(ObjectiveKind k);

// Parses the CLI spellings: leapfrog | leapfrog-gf | nesterov, quadratic |
// quartic, log-log | semilog. Throw std::invalid_argument on anything else.
Method parse_method(const std::string& s);
ObjectiveKind parse_objective(const std::string& s);
Axes parse_axes(const std::string& s);

// Validates the config (descriptive std::invalid_argument before any
// compute), builds the objective and x0, runs the method, records every
// record_every steps plus the initial and final states, halts on divergence.
Trace run_experiment(const ExperimentConfig& config);

// Deterministic unit-norm standard-normal draw (mt19937_64 + Box-Muller).
std::vector<double> draw_x0(std::size_t dim, std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t first_record = 0; // window [first_record, last_record)
  std::size_t last_record = 0;
};

// OLS fit of log f against log t (loglog) or against n (semilog) over the
// records with index in [floor(lo m), floor(hi m)). Throws std::runtime_error
// naming the first offending record if the window holds a nonpositive or
// non-finite f, or fewer than three records.
RateFit estimate_rate(const Trace& trace, double window_lo, double window_hi,
                      Axes axes);

struct ComparisonColumn {
  std::string label;
  // Per level: first step index n with f <= level * f0 and the fresh-gradient
  // count at that step; unset when the level was never reached.
  std::vector<std::optional<std::uint64_t>> first_n;
  std::vector<std::optional<std::uint64_t>> grads_at_first;
};

struct Comparison {
  std::vector<double> levels; // absolute f targets, log-spaced from f0
  double f0 = 0.0;
  std::vector<ComparisonColumn> columns;
};

enum class Normalize { iterations, gradient_evals };

// Runs every config (in parallel when OpenMP is available; assembly is by
// config order), checks they share objective, dimension and start point, and
// tabulates first attainment of log-spaced error levels f0 * 10^{-k/2},
// k = 1..levels_per_run. Throws std::invalid_argument on mismatched configs.
Comparison compare_methods(const std::vector<ExperimentConfig>& configs,
                           Normalize normalize, int levels = 6);

std::string format_comparison(const Comparison& comparison, Normalize normalize);

// Header n,t,f,grad_evals,conserved,diverged; one row per record; %.17g
// floats; conserved column empty when absent. Byte-deterministic.
void emit_csv(const Trace& trace, std::ostream& os);
void emit_csv(const Trace& trace, const std::string& path);

// Reads back what emit_csv wrote. Throws std::runtime_error with the path on
// I/O or parse failure.
Trace parse_csv(const std::string& path);
Trace parse_csv(std::istream& is, const std::string& name);

// Static SVG: one polyline per trace, log-scaled f axis, t or n abscissa per
// axes, legend from the labels. Rows with nonpositive or non-finite f are
// dropped from the polylines.
void emit_plot(const std::vector<Trace>& traces,
               const std::vector<std::string>& labels,
               const std::string& path, Axes axes);

} // namespace symplopt::harness

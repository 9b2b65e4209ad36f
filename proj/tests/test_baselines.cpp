#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "symplopt/baselines.hpp"
#include "symplopt/harness.hpp"
#include "symplopt/objectives.hpp"

using namespace symplopt;
using baselines::NesterovConfig;
using baselines::NesterovState;

namespace {

NesterovConfig nominal_config(double eps = 0.1) {
  NesterovConfig cfg;
  cfg.epsilon = eps;
  cfg.params = {2.0, 0.0625};
  cfg.N = 2.0;
  return cfg;
}

} // namespace

TEST_CASE("initialization copies x0 into all three sequences") {
  std::vector<double> x0{1.0, 1.0};
  const auto st = baselines::nesterov_init(x0);
  CHECK(st.x == x0);
  CHECK(st.y == x0);
  CHECK(st.z == x0);
  CHECK(st.n == 0);
}

TEST_CASE("worked first step on f(x) = x^2") {
  auto obj = objectives::build_correlated_quadratic(1, 0.0);
  auto st = baselines::nesterov_init(std::vector<double>{1.0});
  baselines::nesterov_step(st, nominal_config(), *obj);
  CHECK(st.n == 1);
  CHECK(st.x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(st.y[0] == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(st.z[0] == doctest::Approx(0.997525).epsilon(1e-12));
  CHECK(obj->grad_evals() == 2);
}

TEST_CASE("the early mixing weight is genuinely negative, never clamped") {
  // At n = 0 with p = 2 the x-update is 2 z - y; a clamped implementation
  // would return z instead.
  auto obj = objectives::build_correlated_quadratic(1, 0.0);
  NesterovState st;
  st.x = {0.0};
  st.y = {0.0};
  st.z = {1.0};
  st.n = 0;
  baselines::nesterov_step(st, nominal_config(), *obj);
  CHECK(st.x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(st.y[0] == doctest::Approx(1.98).epsilon(1e-13));
}

TEST_CASE("zero gradient freezes z and keeps y equal to x") {
  testsupport::ZeroObjective zero(2);
  auto st = baselines::nesterov_init(std::vector<double>{0.4, -0.7});
  const auto z0 = st.z;
  for (int k = 0; k < 5; ++k) {
    baselines::nesterov_step(st, nominal_config(), zero);
    CHECK(st.y == st.x);
    CHECK(st.z == z0);
  }
}

TEST_CASE("a minimizer is a fixed point") {
  auto obj = objectives::build_correlated_quadratic(3, 0.6);
  auto st = baselines::nesterov_init(std::vector<double>{0.0, 0.0, 0.0});
  for (int k = 0; k < 10; ++k) baselines::nesterov_step(st, nominal_config(), *obj);
  for (double v : st.x) CHECK(v == 0.0);
  for (double v : st.y) CHECK(v == 0.0);
  for (double v : st.z) CHECK(v == 0.0);
}

TEST_CASE("exactly two gradient evaluations per step") {
  auto obj = objectives::build_correlated_quadratic(4, 0.5);
  auto st = baselines::nesterov_init(std::vector<double>{0.3, 0.1, -0.2, 0.9});
  for (int k = 0; k < 7; ++k) baselines::nesterov_step(st, nominal_config(), *obj);
  CHECK(obj->grad_evals() == 14);
}

TEST_CASE("run validation and record cadence") {
  auto obj = objectives::build_correlated_quadratic(2, 0.5);
  std::vector<double> x0{0.5, 0.5};

  CHECK_THROWS_AS(baselines::nesterov_run(x0, nominal_config(), *obj, 0, 1e10),
                  std::invalid_argument);

  SUBCASE("every third step plus first and last") {
    const auto trace = baselines::nesterov_run(x0, nominal_config(), *obj, 10, 1e10, 3);
    REQUIRE(trace.records.size() == 5);
    CHECK(trace.records[0].n == 0);
    CHECK(trace.records[1].n == 3);
    CHECK(trace.records[2].n == 6);
    CHECK(trace.records[3].n == 9);
    CHECK(trace.records[4].n == 10);
    CHECK(!trace.diverged);
  }

  SUBCASE("cadence larger than the run yields first and last only") {
    const auto trace = baselines::nesterov_run(x0, nominal_config(), *obj, 5, 1e10, 100);
    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records.front().n == 0);
    CHECK(trace.records.back().n == 5);
  }

  SUBCASE("model time is t0 + n epsilon and conserved stays empty") {
    const auto trace = baselines::nesterov_run(x0, nominal_config(), *obj, 4, 1e10, 2, 2.5);
    REQUIRE(trace.records.size() >= 3);
    CHECK(trace.records[0].t == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(trace.records[1].t == doctest::Approx(2.7).epsilon(1e-14));
    for (const auto& rec : trace.records) CHECK(!rec.conserved.has_value());
  }

  SUBCASE("gradient counter in the trace matches 2n") {
    const auto trace = baselines::nesterov_run(x0, nominal_config(), *obj, 6, 1e10);
    CHECK(trace.records.back().grad_evals == 12);
    CHECK(trace.records.front().grad_evals == 0);
  }
}

TEST_CASE("large step on the correlated quadratic diverges within the budget") {
  auto obj = objectives::build_correlated_quadratic(50, 0.9);
  const auto x0 = harness::draw_x0(50, 1);
  const auto trace = baselines::nesterov_run(x0, nominal_config(0.25), *obj, 10000, 1e10);
  CHECK(trace.diverged);
  CHECK(trace.records.back().diverged);
  CHECK(trace.records.back().n < 10000);
}

TEST_CASE("nominal step decreases f with a negative semilog trend") {
  auto obj = objectives::build_correlated_quadratic(50, 0.9);
  const auto x0 = harness::draw_x0(50, 1);
  const auto trace = baselines::nesterov_run(x0, nominal_config(0.1), *obj, 300, 1e10);
  CHECK(!trace.diverged);
  CHECK(trace.records.back().f < trace.records.front().f);
  const auto fit = harness::estimate_rate(trace, 0.5, 1.0, harness::Axes::semilog);
  CHECK(fit.slope < 0.0);
}

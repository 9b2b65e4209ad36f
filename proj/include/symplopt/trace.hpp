#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace symplopt {

struct TraceRecord {
  std::uint64_t n = 0;           // step index
  double t = 0.0;                // model time
  double f = 0.0;                // objective value at x_n
  std::uint64_t grad_evals = 0;  // fresh gradient evaluations so far
  std::optional<double> conserved; // H + E, leapfrog runs only
  bool diverged = false;
};

struct Trace {
  std::vector<TraceRecord> records;
  bool diverged = false;
  std::string config_echo; // key=value summary of the generating config
};

} // namespace symplopt

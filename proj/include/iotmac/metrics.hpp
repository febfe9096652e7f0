#pragma once

#include <cstdint>

namespace iotmac {

// Flow-level outcome counters for one simulation run. Flows whose outcome is
// still open when the horizon ends are excluded from both counts.
struct RunMetrics {
  std::int64_t successes = 0;
  std::int64_t failures = 0;
  double tx_time = 0.0;  // cumulative transmission time, time units
  double horizon = 0.0;  // simulated time, time units
};

// Successful flows per time unit. Throws std::domain_error when horizon <= 0.
double throughput(const RunMetrics& m);

// Transmission time spent per successful flow; +infinity when nothing
// succeeded (serialized as "inf").
double energy_per_success(const RunMetrics& m);

}  // namespace iotmac

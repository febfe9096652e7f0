#include "iotmac/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace iotmac {

double throughput(const RunMetrics& m) {
  if (!(m.horizon > 0.0))
    throw std::domain_error("throughput: undefined for horizon <= 0");
  return static_cast<double>(m.successes) / m.horizon;
}

double energy_per_success(const RunMetrics& m) {
  if (m.successes == 0) return std::numeric_limits<double>::infinity();
  return m.tx_time / static_cast<double>(m.successes);
}

}  // namespace iotmac

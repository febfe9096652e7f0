#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iotmac/metrics.hpp"
#include "iotmac/reservation.hpp"

using namespace iotmac;

TEST_CASE("throughput is successes per time unit") {
  CHECK(throughput({0, 10, 0.0, 100.0}) == 0.0);
  CHECK(throughput({500, 0, 0.0, 25000.0}) == doctest::Approx(0.02));
  CHECK_THROWS_AS(throughput({1, 0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("energy per success handles the degenerate cases") {
  CHECK(energy_per_success({5, 0, 0.0, 100.0}) == 0.0);
  CHECK(energy_per_success({2, 0, 33.0, 100.0}) == doctest::Approx(16.5));
  CHECK(std::isinf(energy_per_success({0, 3, 42.0, 100.0})));
}

TEST_CASE("accounting rule: one unit per contention attempt, slot_len per packet") {
  // A lone flow of three packets: one request transmission plus 3 * 5 time
  // units of scheduled packets gives 16 units for one success.
  const FrameConfig cfg{3, 15, 7, 5};
  MacState state;
  state.pending.push_back({1, 0.0, 3, 200.0});
  state.clock = 50.0;
  Rng rng(1);
  const FrameReport rep = run_frame(state, cfg, 1.0, {}, rng);
  REQUIRE(rep.accepted == 1);
  REQUIRE(rep.completed == 1);
  const double tx_time = rep.contenders + static_cast<double>(cfg.slot_len) * rep.transmissions;
  const RunMetrics m{rep.completed, rep.failed, tx_time, 50.0};
  CHECK(energy_per_success(m) == doctest::Approx(16.0));
}

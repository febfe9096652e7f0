#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "iotmac/csma.hpp"

using namespace iotmac;

TEST_CASE("backoff doubles the window and draws uniformly") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const BackoffDraw d = backoff_after_collision(2, 16, rng);
    CHECK(d.cw == 4);
    CHECK(d.backoff >= 0);
    CHECK(d.backoff <= 3);
  }
  // Saturated window stays put.
  CHECK(backoff_after_collision(16, 16, rng).cw == 16);
  CHECK_THROWS_AS(backoff_after_collision(32, 16, rng), std::invalid_argument);
}

TEST_CASE("backoff draws are uniform (chi-square)") {
  Rng rng(2);
  std::vector<double> observed(4, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++observed[backoff_after_collision(2, 16, rng).backoff];
  const std::vector<double> expected(4, n / 4.0);
  CHECK(testutil::chi2_gof_ok(observed, expected));
}

TEST_CASE("csma params are validated") {
  CsmaParams p;
  p.cw_min = 3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = CsmaParams{};
  p.cw_max = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = CsmaParams{};
  p.max_collisions = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("no arrivals, no activity") {
  Rng rng(3);
  const RunMetrics m = run_csma({}, CsmaParams{}, 1000.0, rng);
  CHECK(m.successes == 0);
  CHECK(m.failures == 0);
  CHECK(m.tx_time == 0.0);
  CHECK(m.horizon == 1000.0);
}

TEST_CASE("an uncontended single-packet flow succeeds with energy k") {
  Rng rng(4);
  const std::vector<FlowSpec> one{{1, 0.0, 1, 100.0}};
  const RunMetrics m = run_csma(one, CsmaParams{}, 1000.0, rng);
  CHECK(m.successes == 1);
  CHECK(m.failures == 0);
  CHECK(m.tx_time == 5.0);
}

TEST_CASE("simultaneous starters collide until the abort threshold") {
  // cw_min = cw_max = 1 pins every backoff to zero, so the two flows collide
  // deterministically three times and abort.
  CsmaParams p;
  p.cw_min = 1;
  p.cw_max = 1;
  Rng rng(5);
  const std::vector<FlowSpec> two{{1, 0.0, 1, 500.0}, {2, 0.0, 1, 500.0}};
  const RunMetrics m = run_csma(two, p, 1000.0, rng);
  CHECK(m.successes == 0);
  CHECK(m.failures == 2);
  CHECK(m.tx_time == 2.0 * 3.0 * p.packet_duration);
}

TEST_CASE("a missed deadline stops further attempts") {
  // Deadline shorter than one packet: the flow transmits once, finishes past
  // its deadline and is failed without retrying.
  Rng rng(6);
  const std::vector<FlowSpec> one{{1, 0.0, 2, 3.0}};
  const RunMetrics m = run_csma(one, CsmaParams{}, 1000.0, rng);
  CHECK(m.successes == 0);
  CHECK(m.failures == 1);
  CHECK(m.tx_time == 5.0);  // exactly one futile packet
}

TEST_CASE("light traffic gets through almost surely") {
  Rng arr_rng(7), rng(8);
  const LoadModel model = LoadModel::deterministic(3);
  const double horizon = 60000.0;
  const auto arrivals = generate_arrivals(0.002, horizon, model, 5, arr_rng);
  const RunMetrics m = run_csma(arrivals, CsmaParams{}, horizon, rng);
  CHECK(m.successes + m.failures <= static_cast<std::int64_t>(arrivals.size()));
  // Collisions are rare at this spacing; nearly every resolved flow succeeds.
  CHECK(m.successes >= static_cast<std::int64_t>(0.95 * (arrivals.size() - 5)));
  // Channel time bound: three packets of five ticks per success.
  CHECK(static_cast<double>(m.successes) * 15.0 <= horizon);
}

TEST_CASE("throughput eventually decreases with the arrival rate") {
  const LoadModel model = LoadModel::deterministic(3);
  const double horizon = 50000.0;
  auto tp = [&](double rate, int seed) {
    Rng arr_rng(seed), rng(seed + 1);
    const auto arrivals = generate_arrivals(rate, horizon, model, 5, arr_rng);
    const RunMetrics m = run_csma(arrivals, CsmaParams{}, horizon, rng);
    return throughput(m);
  };
  const double moderate = tp(0.05, 9);
  const double overloaded = tp(0.5, 11);
  CHECK(overloaded < moderate);
}

TEST_CASE("the non-freezing countdown variant also runs") {
  CsmaParams p;
  p.freeze_backoff = false;
  Rng arr_rng(12), rng(13);
  const auto arrivals =
      generate_arrivals(0.05, 5000.0, LoadModel::deterministic(3), 5, arr_rng);
  const RunMetrics m = run_csma(arrivals, p, 5000.0, rng);
  CHECK(m.successes > 0);
  CHECK(m.successes + m.failures <= static_cast<std::int64_t>(arrivals.size()));
}

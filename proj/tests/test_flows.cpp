#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "iotmac/flows.hpp"

using namespace iotmac;

namespace {
const FrameConfig kCfg{3, 15, 7, 5};  // T = 50
}

TEST_CASE("deadline_to_slots matches the conversion formula") {
  CHECK(deadline_to_slots(100.0, 100.0, kCfg) == 0);
  // x = 120: two full frames (14 slots) plus floor(0.4 * 10) = 4.
  CHECK(deadline_to_slots(120.0, 0.0, kCfg) == 18);
  // One full frame exactly.
  CHECK(deadline_to_slots(50.0, 0.0, kCfg) == 7);
  CHECK(deadline_to_slots(99.0, 100.0, kCfg) == std::nullopt);
}

TEST_CASE("deadline_to_slots is monotone and frame-periodic") {
  Rng rng(42);
  std::uniform_real_distribution<double> pick(0.0, 400.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    CHECK(*deadline_to_slots(a, 0.0, kCfg) <= *deadline_to_slots(b, 0.0, kCfg));
  }
  const int T = kCfg.frame_len();
  for (int r = 0; r < T; ++r)
    for (int m = 0; m <= 4; ++m)
      CHECK(*deadline_to_slots(m * T + r, 0.0, kCfg) ==
            m * kCfg.tx_slots + *deadline_to_slots(r, 0.0, kCfg));
}

TEST_CASE("generate_arrivals validates inputs") {
  Rng rng(1);
  const LoadModel model = LoadModel::deterministic(3);
  CHECK_THROWS_AS(generate_arrivals(0.0, 10.0, model, 5, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_arrivals(1.0, 0.0, model, 5, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_arrivals(1.0, 10.0, model, 1, rng),
                  std::invalid_argument);
}

TEST_CASE("a vanishing rate produces no arrivals") {
  Rng rng(7);
  CHECK(generate_arrivals(1e-9, 50.0, LoadModel::deterministic(3), 5, rng).empty());
}

TEST_CASE("generated flows carry slot-denominated deadlines") {
  Rng rng(11);
  const int k = 5;
  const LoadModel model = LoadModel::deterministic(3);
  const auto flows = generate_arrivals(0.5, 5000.0, model, k, rng);
  REQUIRE(!flows.empty());
  std::set<std::uint64_t> ids;
  double prev = -1.0;
  for (const FlowSpec& f : flows) {
    CHECK(f.arrival > prev);
    prev = f.arrival;
    ids.insert(f.id);
    CHECK(f.load == 3);
    const double slack = f.deadline / k - f.load;
    CHECK(slack == std::floor(slack));
    CHECK(slack >= 2);
    CHECK(slack <= 20);
  }
  CHECK(ids.size() == flows.size());
}

TEST_CASE("load models reproduce their moments") {
  Rng rng(13);
  const LoadModel det = LoadModel::deterministic(3);
  for (int i = 0; i < 1000; ++i) CHECK(det.sample_load(rng) == 3);

  const LoadModel geo = LoadModel::geometric(1.25);
  const int n = 100000;
  double sum = 0;
  int min_seen = 1 << 30;
  for (int i = 0; i < n; ++i) {
    const int l = geo.sample_load(rng);
    min_seen = std::min(min_seen, l);
    sum += l;
  }
  CHECK(min_seen >= 1);
  // Var = (1 - q) / q^2 with q = 0.8.
  const double se = std::sqrt(0.3125 / n);
  CHECK(std::abs(sum / n - 1.25) < 3 * se);
}

TEST_CASE("load model validation") {
  CHECK_THROWS_AS(LoadModel::geometric(0.9), std::invalid_argument);
  CHECK_THROWS_AS(LoadModel::deterministic(0), std::invalid_argument);
  CHECK_THROWS_AS(LoadModel::deterministic(3, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(LoadModel::deterministic(3, 0, 4), std::invalid_argument);
  Rng rng(1);
  CHECK(LoadModel::geometric(1.0).sample_load(rng) == 1);  // degenerate mean
}

TEST_CASE("per-frame arrival counts pass a Poisson goodness-of-fit test") {
  Rng rng(17);
  const double rate = 0.08;
  const int T = 50;
  const int frames = 4000;
  const auto flows =
      generate_arrivals(rate, static_cast<double>(frames) * T,
                        LoadModel::deterministic(3), 5, rng);

  std::vector<double> counts(frames, 0.0);
  for (const FlowSpec& f : flows) ++counts[static_cast<int>(f.arrival / T)];

  const double mu = rate * T;  // 4 arrivals per frame in expectation
  const int max_bin = 16;
  std::vector<double> observed(max_bin + 1, 0.0), expected(max_bin + 1, 0.0);
  for (double c : counts) ++observed[std::min<int>(static_cast<int>(c), max_bin)];
  double pmf = std::exp(-mu);
  double tail = 1.0;
  for (int i = 0; i < max_bin; ++i) {
    expected[i] = frames * pmf;
    tail -= pmf;
    pmf *= mu / (i + 1);
  }
  expected[max_bin] = frames * std::max(tail, 0.0);
  CHECK(testutil::chi2_gof_ok(observed, expected));

  const double sample_mean = testutil::mean(counts);
  CHECK(std::abs(sample_mean - mu) < 3 * std::sqrt(mu / frames));
}

TEST_CASE("ArrivalStream replays generate_arrivals draw for draw") {
  const LoadModel model = LoadModel::geometric(1.25);
  Rng batch_rng(99);
  const auto batch = generate_arrivals(0.3, 2000.0, model, 5, batch_rng);

  ArrivalStream stream(0.3, model, 5, Rng(99));
  std::vector<FlowSpec> streamed;
  for (double t = 100.0; t <= 2000.0; t += 100.0) {
    for (const FlowSpec& f : stream.take_until(t)) streamed.push_back(f);
  }
  REQUIRE(streamed.size() == batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(streamed[i].id == batch[i].id);
    CHECK(streamed[i].arrival == doctest::Approx(batch[i].arrival).epsilon(1e-12));
    CHECK(streamed[i].load == batch[i].load);
    CHECK(streamed[i].deadline == batch[i].deadline);
  }
}

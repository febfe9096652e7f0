#include "iotmac/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "iotmac/adaptation.hpp"
#include "iotmac/csma.hpp"
#include "iotmac/deadline.hpp"
#include "iotmac/reservation.hpp"
#include "iotmac/rng.hpp"

namespace iotmac {

namespace {

// Seed-stream tags for the fixed splitting rule. Arrival streams are tagged
// independently of the mode so that adaptive and oracle runs at the same
// (lambda, replication) see the same traffic realization.
enum : std::uint64_t {
  kStreamArrivals = 0xA1,
  kStreamMac = 0xB2,
  kStreamCalibration = 0xC3,
  kStreamCsmaArrivals = 0xD4,
  kStreamCsmaChannel = 0xE5,
};

std::vector<FrameConfig> arm_configs(const ExperimentConfig& config) {
  std::vector<FrameConfig> out;
  for (std::size_t i = 0; i < config.arms.size(); ++i)
    out.push_back(config.arm_config(i));
  return out;
}

// Per-run accumulator around the frame engine.
struct ReservationRun {
  MacState state;
  ScheduleAudit audit;
  ArrivalStream stream;
  Rng rng;
  bool retry;
  int slot_length;

  std::int64_t accepted = 0;
  std::int64_t completed = 0;
  std::int64_t failed = 0;
  double tx_time = 0.0;

  ReservationRun(double lambda, const LoadModel& load, int slot_length,
                 std::uint64_t arrival_seed, std::uint64_t mac_seed, bool retry)
      : stream(lambda, load, slot_length, Rng(arrival_seed)),
        rng(mac_seed),
        retry(retry),
        slot_length(slot_length) {}

  FrameReport frame(const FrameConfig& cfg, double p) {
    const std::vector<FlowSpec> arrivals =
        stream.take_until(state.clock + cfg.frame_len());
    const FrameReport report =
        run_frame(state, cfg, p, arrivals, rng, retry, &audit);
    accepted += report.accepted;
    completed += report.completed;
    failed += report.failed;
    tx_time += report.contenders +
               static_cast<double>(slot_length) * report.transmissions;
    return report;
  }

  // Pending flows get no further contention phase once flushing starts, and
  // flows arriving during the flush are failed for the same reason.
  void flush(const FrameConfig& cfg) {
    failed += static_cast<std::int64_t>(state.pending.size());
    state.pending.clear();
    const FlushReport report = run_flush_frames(state, cfg, &audit);
    completed += report.completed;
    tx_time += static_cast<double>(slot_length) * report.transmissions;
    failed += static_cast<std::int64_t>(stream.take_until(state.clock).size());
  }

  RunMetrics metrics() const {
    return RunMetrics{completed, failed, tx_time, state.clock};
  }
};

RunResult run_adaptive(const ExperimentConfig& config, double lambda,
                       std::size_t lambda_index, int replication) {
  const auto rep = static_cast<std::uint64_t>(replication);
  UcbState ucb(arm_configs(config), config.frames_per_play, config.delta);
  ReservationRun run(
      lambda, config.load, config.slot_length,
      mix_seed(config.seed, {kStreamArrivals, lambda_index, rep}),
      mix_seed(config.seed, {kStreamMac, 0, lambda_index, rep}),
      config.retry_until_expiry);

  int frames_done = 0;
  while (frames_done < config.frames) {
    const std::size_t arm = ucb.select();
    const FrameConfig& cfg = ucb.arm(arm).cfg;
    std::int64_t accepted_in_play = 0;
    for (int f = 0; f < config.frames_per_play; ++f, ++frames_done) {
      const FrameReport report = run.frame(cfg, ucb.arm(arm).pctrl.p);
      accepted_in_play += report.accepted;
      ucb.arm(arm).pctrl = update_p(ucb.arm(arm).pctrl, report.contention, cfg);
    }
    run.flush(cfg);
    ucb.update(arm, play_reward(accepted_in_play, cfg, config.frames_per_play));
  }

  RunResult result;
  result.mode = Mode::adaptive;
  result.lambda = lambda;
  result.replication = replication;
  result.metrics = run.metrics();
  result.accepted = run.accepted;
  result.completed = run.completed;
  result.failed = run.failed;
  for (std::size_t i = 0; i < ucb.size(); ++i) {
    result.final_p.push_back(ucb.arm(i).pctrl.p);
    result.play_counts.push_back(ucb.arm(i).plays);
  }
  return result;
}

// Fixed-arm run with p pinned to optimal_p. Used both for the oracle's
// offline arm calibration and for its full horizon.
ReservationRun run_fixed_arm(const ExperimentConfig& config, double lambda,
                             const FrameConfig& cfg, int frames,
                             std::uint64_t arrival_seed, std::uint64_t mac_seed) {
  ReservationRun run(lambda, config.load, config.slot_length, arrival_seed,
                     mac_seed, config.retry_until_expiry);
  const double p = optimal_p(lambda, cfg);
  for (int f = 0; f < frames; ++f) run.frame(cfg, p);
  return run;
}

RunResult run_oracle(const ExperimentConfig& config, double lambda,
                     std::size_t lambda_index, int replication) {
  constexpr int kCalibrationFrames = 200;
  const auto rep = static_cast<std::uint64_t>(replication);
  const std::vector<FrameConfig> arms = arm_configs(config);

  // Offline exhaustive calibration: best fixed arm by throughput.
  std::size_t best = 0;
  double best_rate = -1.0;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const ReservationRun probe = run_fixed_arm(
        config, lambda, arms[a], kCalibrationFrames,
        mix_seed(config.seed, {kStreamCalibration, lambda_index, rep, a, 0}),
        mix_seed(config.seed, {kStreamCalibration, lambda_index, rep, a, 1}));
    const double rate = throughput(probe.metrics());
    if (rate > best_rate) {
      best_rate = rate;
      best = a;
    }
  }

  const ReservationRun run = run_fixed_arm(
      config, lambda, arms[best], config.frames,
      mix_seed(config.seed, {kStreamArrivals, lambda_index, rep}),
      mix_seed(config.seed, {kStreamMac, 1, lambda_index, rep}));

  RunResult result;
  result.mode = Mode::oracle;
  result.lambda = lambda;
  result.replication = replication;
  result.metrics = run.metrics();
  result.accepted = run.accepted;
  result.completed = run.completed;
  result.failed = run.failed;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    result.final_p.push_back(optimal_p(lambda, arms[a]));
    result.play_counts.push_back(a == best ? 1 : 0);
  }
  return result;
}

RunResult run_csma_mode(const ExperimentConfig& config, double lambda,
                        std::size_t lambda_index, int replication) {
  const auto rep = static_cast<std::uint64_t>(replication);
  const double horizon =
      static_cast<double>(config.frames) * config.frame_length;
  CsmaParams params;
  params.packet_duration = config.slot_length;
  params.freeze_backoff = config.freeze_backoff;

  // One independent CSMA channel per reservation channel, each at rate
  // lambda / channels; extensive quantities pool across channels.
  RunMetrics pooled;
  pooled.horizon = horizon;
  for (int ch = 0; ch < config.channels; ++ch) {
    const auto chan = static_cast<std::uint64_t>(ch);
    Rng arrival_rng(
        mix_seed(config.seed, {kStreamCsmaArrivals, lambda_index, rep, chan}));
    Rng sim_rng(
        mix_seed(config.seed, {kStreamCsmaChannel, lambda_index, rep, chan}));
    const std::vector<FlowSpec> arrivals = generate_arrivals(
        lambda / config.channels, horizon, config.load, config.slot_length,
        arrival_rng);
    const RunMetrics m = run_csma(arrivals, params, horizon, sim_rng);
    pooled.successes += m.successes;
    pooled.failures += m.failures;
    pooled.tx_time += m.tx_time;
  }

  RunResult result;
  result.mode = Mode::csma;
  result.lambda = lambda;
  result.replication = replication;
  result.metrics = pooled;
  result.accepted = pooled.successes;
  result.completed = pooled.successes;
  result.failed = pooled.failures;
  return result;
}

}  // namespace

RunResult run_one(const ExperimentConfig& config, double lambda,
                  std::size_t lambda_index, int replication) {
  switch (config.mode) {
    case Mode::adaptive:
      return run_adaptive(config, lambda, lambda_index, replication);
    case Mode::oracle:
      return run_oracle(config, lambda, lambda_index, replication);
    case Mode::csma:
      return run_csma_mode(config, lambda, lambda_index, replication);
  }
  throw ConfigError("run_one: unknown mode");
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<double> grid = config.lambda_grid();
  std::vector<RunResult> rows;
  rows.reserve(grid.size() * config.replications);
  for (std::size_t li = 0; li < grid.size(); ++li)
    for (int rep = 0; rep < config.replications; ++rep)
      rows.push_back(run_one(config, grid[li], li, rep));
  return rows;
}

}  // namespace iotmac

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iotmac/flows.hpp"
#include "iotmac/metrics.hpp"

namespace iotmac {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { adaptive, oracle, csma };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);  // throws ConfigError

// Full description of one experiment: protocol mode, frame geometry, arm set,
// traffic model, arrival-rate grid, and run lengths. Defaults reproduce the
// reference setup: 3 channels, 50-unit frames, 5-unit transmission slots,
// arms {(20,6),(15,7),(10,8),(5,9)}, 50 frames per play.
struct ExperimentConfig {
  Mode mode = Mode::adaptive;
  int channels = 3;
  int frame_length = 50;  // T, time units
  int slot_length = 5;    // k, time units per transmission slot
  std::vector<std::pair<int, int>> arms{{20, 6}, {15, 7}, {10, 8}, {5, 9}};
  int frames_per_play = 50;  // r
  LoadModel load = LoadModel::deterministic(3);
  std::vector<double> lambdas;  // empty -> logarithmic default grid
  int frames = 1000;            // frames per (lambda, replication)
  int replications = 10;
  std::uint64_t seed = 1;
  double delta = 0.05;
  bool retry_until_expiry = false;
  bool freeze_backoff = true;
  std::string out = "results.csv";

  FrameConfig arm_config(std::size_t i) const;
  int max_tx_slots() const;
  // Sustainable successful-flow rate: channels * max tx_slots /
  // (frame_length * mean load).
  double capacity_bound() const;
  // The configured grid, or 12 log-spaced rates from a tenth of the capacity
  // bound up to eight times it.
  std::vector<double> lambda_grid() const;
  void validate() const;  // throws ConfigError

  std::string summary_path() const;
  std::string sidecar_path() const;
};

// Parse a key = value config file ('#' comments). Unknown keys and
// out-of-range values are rejected with descriptive errors.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");

// One (mode, lambda, replication) outcome.
struct RunResult {
  Mode mode = Mode::adaptive;
  double lambda = 0.0;
  int replication = 0;
  RunMetrics metrics;
  std::int64_t accepted = 0;
  std::int64_t completed = 0;
  std::int64_t failed = 0;
  std::vector<double> final_p;   // per arm
  std::vector<int> play_counts;  // per arm
};

// Run one replication of the configured mode at the given rate.
RunResult run_one(const ExperimentConfig& config, double lambda,
                  std::size_t lambda_index, int replication);

// Full sweep over the lambda grid and replications, rows ordered by
// (lambda, replication). Deterministic given (config, seed).
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

// CSV serializations; byte-stable for a fixed input.
std::string results_csv(const std::vector<RunResult>& rows);
std::string summary_csv(const std::vector<RunResult>& rows);
// Sidecar JSON carrying the resolved configuration (including the lambda
// grid actually used).
std::string config_json(const ExperimentConfig& config);

// Write results, summary and sidecar next to config.out; returns the paths.
std::vector<std::string> write_outputs(const ExperimentConfig& config,
                                       const std::vector<RunResult>& rows);

}  // namespace iotmac

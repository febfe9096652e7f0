#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iotmac/rng.hpp"

namespace iotmac {

// One burst of traffic from an IoT node: `load` packets, all of which must be
// delivered within `deadline` time units of the arrival instant.
struct FlowSpec {
  std::uint64_t id = 0;
  double arrival = 0.0;   // generation time, time units
  int load = 1;           // packets
  double deadline = 0.0;  // relative deadline, time units
};

// Frame geometry: a contention phase of `contention_slots` one-unit slots
// followed by `tx_slots` transmission slots of `slot_len` units each, on
// `channels` parallel channels. Frame length is contention_slots +
// slot_len * tx_slots.
struct FrameConfig {
  int channels = 3;
  int contention_slots = 15;  // N_C
  int tx_slots = 7;           // N_T
  int slot_len = 5;           // k, integer > 1

  int frame_len() const { return contention_slots + slot_len * tx_slots; }
  int contention_blocks() const { return channels * contention_slots; }
  void validate() const;  // throws std::invalid_argument
};

// Load/slack distributions for generated flows. Loads are whole packets
// (>= 1); slack is an integer number of transmission slots added on top of
// the load, so the relative deadline is (load + slack) * slot_len time units.
struct LoadModel {
  enum class Kind { deterministic, geometric };
  Kind kind = Kind::deterministic;
  double value = 3.0;  // fixed load, or the mean of the geometric law
  int slack_min = 2;   // transmission slots
  int slack_max = 20;

  static LoadModel deterministic(int packets, int slack_min = 2,
                                 int slack_max = 20);
  // Geometric on {1, 2, ...} with the given mean (success prob 1/mean).
  static LoadModel geometric(double mean, int slack_min = 2,
                             int slack_max = 20);

  int sample_load(Rng& rng) const;
  int sample_slack(Rng& rng) const;
  double mean_load() const;
  void validate() const;  // throws std::invalid_argument
};

// Poisson arrivals over [0, horizon): i.i.d. exponential inter-arrival times
// at `rate`, loads and slacks drawn from `model`. Returned sorted by arrival
// time with ids unique within the run.
std::vector<FlowSpec> generate_arrivals(double rate, double horizon,
                                        const LoadModel& model, int slot_len,
                                        Rng& rng);

// Remaining deadline in transmission slots for a flow with the given absolute
// deadline, seen from `now` (the end of a contention phase): every full frame
// ahead contributes tx_slots, the partial frame contributes
// floor(remainder / slot_len) capped at tx_slots. nullopt once the deadline
// has already passed.
std::optional<int> deadline_to_slots(double absolute_deadline, double now,
                                     const FrameConfig& cfg);

// Incremental arrival generator with its own RNG. Hands out flows in time
// order so frame engines can consume them frame by frame without knowing the
// final horizon up front.
class ArrivalStream {
 public:
  ArrivalStream(double rate, const LoadModel& model, int slot_len, Rng rng);

  // All flows with arrival time < t that have not been taken yet, in order.
  std::vector<FlowSpec> take_until(double t);

 private:
  void stage_next_();

  double rate_;
  LoadModel model_;
  int slot_len_;
  Rng rng_;
  FlowSpec staged_;
  std::uint64_t next_id_ = 1;
};

}  // namespace iotmac

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "iotmac/deadline.hpp"
#include "iotmac/flows.hpp"
#include "iotmac/rng.hpp"

namespace iotmac {

// Per-frame contention block tallies; idle + success + collision equals
// channels * contention_slots.
struct ContentionStats {
  int idle = 0;
  int success = 0;    // blocks picked by exactly one contender
  int collision = 0;  // blocks picked by two or more

  int blocks() const { return idle + success + collision; }
};

struct ContentionOutcome {
  // Requests the master can act on (deadline not yet expired), arrival order.
  std::vector<AdmissionRequest> requests;
  ContentionStats stats;
  std::vector<std::uint64_t> contender_ids;  // one request transmission each
  int expired = 0;  // sole winners whose deadline had already lapsed
};

// Each pending flow contends with probability p and, if it does, transmits
// its request in a uniformly chosen (slot, channel) block. Sole occupants are
// received; their remaining deadline is computed at `contention_end`.
ContentionOutcome run_contention_phase(std::span<const FlowSpec> pending,
                                       double p, const FrameConfig& cfg,
                                       double contention_end, Rng& rng);

// Always-on invariant checker fed by the frame engine: slot legality (at most
// `channels` transmissions per slot, no flow twice in a slot) and per-flow
// deadline compliance (every admitted flow finishes its load within its
// admitted slot budget). Violations throw std::logic_error. Also keeps a
// per-flow energy ledger for conservation checks.
class ScheduleAudit {
 public:
  void on_contention(std::span<const std::uint64_t> contender_ids);
  void on_admitted(const AdmissionRequest& request);
  void on_transmission_phase(const SlotSchedule& schedule, int channels,
                             int slot_len);

  std::int64_t completed() const { return completed_; }
  std::int64_t open() const { return static_cast<std::int64_t>(open_.size()); }
  std::int64_t slots_elapsed() const { return slot_counter_; }
  double total_energy() const;

 private:
  struct Tracked {
    int remaining;
    std::int64_t deadline_slot;  // exclusive, in global transmission slots
  };
  std::unordered_map<std::uint64_t, Tracked> open_;
  std::unordered_map<std::uint64_t, double> energy_;
  std::int64_t slot_counter_ = 0;
  std::int64_t completed_ = 0;
};

struct FrameReport {
  int accepted = 0;
  int completed = 0;
  int failed = 0;
  int contenders = 0;     // request transmissions, 1 time unit of energy each
  int transmissions = 0;  // scheduled packets, slot_len time units each
  ContentionStats contention;
};

// Master-side state between frames.
struct MacState {
  std::vector<ActiveFlow> active;   // admitted, not yet completed
  std::vector<FlowSpec> pending;    // generated last frame, contend this frame
  double clock = 0.0;               // frame start, time units
  std::int64_t frame_index = 0;
};

// One full frame: contention over state.pending, admission control, LLF
// schedule for tx_slots, clock advance. `arrivals` are the flows generated
// during this frame; they become the next frame's pending set. Without
// retry_until_expiry every pending flow resolves now: accepted, or failed
// (declined, collided, expired, or rejected). With it, unaccepted flows whose
// deadline has not yet passed stay pending and contend again.
FrameReport run_frame(MacState& state, const FrameConfig& cfg, double p,
                      std::span<const FlowSpec> arrivals, Rng& rng,
                      bool retry_until_expiry = false,
                      ScheduleAudit* audit = nullptr);

struct FlushReport {
  int frames = 0;
  int completed = 0;
  int transmissions = 0;
};

// Contention-free frames of floor(frame_len / slot_len) transmission slots,
// run until the active set drains. The caller is responsible for failing
// flows that arrive while flushing (they get no contention phase).
FlushReport run_flush_frames(MacState& state, const FrameConfig& cfg,
                             ScheduleAudit* audit = nullptr);

}  // namespace iotmac

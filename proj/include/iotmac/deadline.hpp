#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace iotmac {

// Residual state of an admitted (or candidate) flow: packets left and
// remaining deadline, both counted in transmission slots.
struct ActiveFlow {
  std::uint64_t id = 0;
  int load = 1;            // packets still to transmit, >= 1 while active
  int deadline_slots = 0;  // transmission slots left before the deadline

  int laxity() const { return deadline_slots - load; }
};

// One admission request as received by the master.
struct AdmissionRequest {
  std::uint64_t id = 0;
  int load = 1;
  int deadline_slots = 0;
};

// Per-slot transmission grid; slots[s] holds the flow ids scheduled in slot
// s, at most one channel per flow and at most `channels` per slot.
struct SlotSchedule {
  std::vector<std::vector<std::uint64_t>> slots;
};

// Ids of the (up to `channels`) flows with least laxity. Ties go to the
// smaller remaining deadline, then the smaller id. Result sorted by id.
std::vector<std::uint64_t> llf_step(std::span<const ActiveFlow> flows,
                                    int channels);

// True iff least-laxity-first scheduling completes every flow before its
// laxity goes negative: per slot, serve the `channels` least-lax flows,
// decrement their loads and everyone's deadline, drop finished flows.
// Simulates at most max(deadline_slots) slots.
bool llf_feasible(std::vector<ActiveFlow> flows, int channels);

// Independent feasibility check via max flow on the flow/slot network:
// source -> flow i with capacity load_i, flow i -> slot s (s <= deadline_i)
// with capacity 1, slot -> sink with capacity `channels`. Feasible iff the
// max flow saturates the total load.
bool maxflow_feasible(std::span<const ActiveFlow> flows, int channels);

struct AdmissionResult {
  std::vector<std::uint64_t> accepted;  // request ids, in acceptance order
  std::vector<ActiveFlow> active;       // grown active list, still feasible
};

// Greedy admission: requests sorted by ascending load (ties: ascending
// deadline, then arrival order), each kept iff the union with the already
// accepted set stays LLF-feasible. Precondition: `active` is feasible.
AdmissionResult admission_control(std::vector<ActiveFlow> active,
                                  std::span<const AdmissionRequest> requests,
                                  int channels);

struct ScheduleResult {
  SlotSchedule schedule;
  std::vector<ActiveFlow> active;        // survivors, deadlines decremented
  std::vector<std::uint64_t> completed;  // flows that finished in this phase
  int transmissions = 0;                 // packets scheduled over the phase
};

// Run LLF for `tx_slots` consecutive slots with the same decrement rules as
// llf_feasible. Feasible input never loses a flow to a missed deadline.
ScheduleResult build_schedule(std::vector<ActiveFlow> active, int tx_slots,
                              int channels);

}  // namespace iotmac

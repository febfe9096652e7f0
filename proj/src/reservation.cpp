#include "iotmac/reservation.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace iotmac {

ContentionOutcome run_contention_phase(std::span<const FlowSpec> pending,
                                       double p, const FrameConfig& cfg,
                                       double contention_end, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("run_contention_phase: p must lie in [0,1]");

  const int blocks = cfg.contention_blocks();
  ContentionOutcome out;
  std::vector<int> occupancy(blocks, 0);
  std::vector<int> chosen(pending.size(), -1);

  std::bernoulli_distribution contends(p);
  std::uniform_int_distribution<int> block(0, blocks - 1);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!contends(rng)) continue;
    const int b = block(rng);
    chosen[i] = b;
    ++occupancy[b];
    out.contender_ids.push_back(pending[i].id);
  }

  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (chosen[i] < 0 || occupancy[chosen[i]] != 1) continue;
    const FlowSpec& f = pending[i];
    if (auto slots = deadline_to_slots(f.arrival + f.deadline, contention_end, cfg))
      out.requests.push_back(AdmissionRequest{f.id, f.load, *slots});
    else
      ++out.expired;
  }

  for (int occ : occupancy) {
    if (occ == 0)
      ++out.stats.idle;
    else if (occ == 1)
      ++out.stats.success;
    else
      ++out.stats.collision;
  }
  return out;
}

void ScheduleAudit::on_contention(std::span<const std::uint64_t> contender_ids) {
  for (std::uint64_t id : contender_ids) energy_[id] += 1.0;
}

void ScheduleAudit::on_admitted(const AdmissionRequest& request) {
  if (open_.count(request.id))
    throw std::logic_error("audit: flow admitted twice: id " +
                           std::to_string(request.id));
  if (request.load < 1 || request.deadline_slots < request.load)
    throw std::logic_error("audit: infeasible admission: id " +
                           std::to_string(request.id));
  open_[request.id] = Tracked{request.load, slot_counter_ + request.deadline_slots};
}

void ScheduleAudit::on_transmission_phase(const SlotSchedule& schedule,
                                          int channels, int slot_len) {
  for (const auto& slot : schedule.slots) {
    if (static_cast<int>(slot.size()) > channels)
      throw std::logic_error("audit: slot carries more flows than channels");
    for (std::size_t i = 0; i < slot.size(); ++i)
      for (std::size_t j = i + 1; j < slot.size(); ++j)
        if (slot[i] == slot[j])
          throw std::logic_error("audit: flow scheduled twice in one slot");
    for (std::uint64_t id : slot) {
      auto it = open_.find(id);
      if (it == open_.end())
        throw std::logic_error("audit: transmission by unadmitted flow id " +
                               std::to_string(id));
      if (slot_counter_ >= it->second.deadline_slot)
        throw std::logic_error("audit: admitted flow missed its deadline: id " +
                               std::to_string(id));
      energy_[id] += slot_len;
      if (--it->second.remaining == 0) {
        open_.erase(it);
        ++completed_;
      }
    }
    ++slot_counter_;
  }
}

double ScheduleAudit::total_energy() const {
  double sum = 0.0;
  for (const auto& [id, e] : energy_) sum += e;
  return sum;
}

FrameReport run_frame(MacState& state, const FrameConfig& cfg, double p,
                      std::span<const FlowSpec> arrivals, Rng& rng,
                      bool retry_until_expiry, ScheduleAudit* audit) {
  assert(llf_feasible(state.active, cfg.channels) &&
         "run_frame: active set must be feasible on entry");

  const double contention_end = state.clock + cfg.contention_slots;
  ContentionOutcome contention =
      run_contention_phase(state.pending, p, cfg, contention_end, rng);
  AdmissionResult admission =
      admission_control(std::move(state.active), contention.requests, cfg.channels);
  state.active = std::move(admission.active);

  FrameReport report;
  report.accepted = static_cast<int>(admission.accepted.size());
  report.contenders = static_cast<int>(contention.contender_ids.size());
  report.contention = contention.stats;

  if (audit) {
    audit->on_contention(contention.contender_ids);
    for (std::uint64_t id : admission.accepted)
      for (const AdmissionRequest& r : contention.requests)
        if (r.id == id) {
          audit->on_admitted(r);
          break;
        }
  }

  if (!retry_until_expiry) {
    report.failed = static_cast<int>(state.pending.size()) - report.accepted;
    state.pending.clear();
  } else {
    std::vector<bool> taken(state.pending.size(), false);
    for (std::size_t i = 0; i < state.pending.size(); ++i)
      for (std::uint64_t id : admission.accepted)
        if (state.pending[i].id == id) taken[i] = true;
    std::vector<FlowSpec> keep;
    for (std::size_t i = 0; i < state.pending.size(); ++i) {
      if (taken[i]) continue;
      const FlowSpec& f = state.pending[i];
      if (f.arrival + f.deadline >= contention_end)
        keep.push_back(f);  // still viable, contends again next frame
      else
        ++report.failed;
    }
    state.pending = std::move(keep);
  }

  ScheduleResult sched =
      build_schedule(std::move(state.active), cfg.tx_slots, cfg.channels);
  state.active = std::move(sched.active);
  report.completed = static_cast<int>(sched.completed.size());
  report.transmissions = sched.transmissions;
  if (audit)
    audit->on_transmission_phase(sched.schedule, cfg.channels, cfg.slot_len);

  state.pending.insert(state.pending.end(), arrivals.begin(), arrivals.end());
  state.clock += cfg.frame_len();
  ++state.frame_index;

  assert(llf_feasible(state.active, cfg.channels) &&
         "run_frame: schedule left an infeasible active set");
  return report;
}

FlushReport run_flush_frames(MacState& state, const FrameConfig& cfg,
                             ScheduleAudit* audit) {
  FlushReport report;
  const int slots = cfg.frame_len() / cfg.slot_len;

  int max_deadline = 0;
  for (const ActiveFlow& f : state.active)
    max_deadline = std::max(max_deadline, f.deadline_slots);
  const int frame_cap = max_deadline / std::max(slots, 1) + 2;

  while (!state.active.empty()) {
    if (report.frames > frame_cap)
      throw std::logic_error("run_flush_frames: active set failed to drain");
    ScheduleResult sched =
        build_schedule(std::move(state.active), slots, cfg.channels);
    state.active = std::move(sched.active);
    report.completed += static_cast<int>(sched.completed.size());
    report.transmissions += sched.transmissions;
    if (audit)
      audit->on_transmission_phase(sched.schedule, cfg.channels, cfg.slot_len);
    state.clock += cfg.frame_len();
    ++state.frame_index;
    ++report.frames;
  }
  return report;
}

}  // namespace iotmac

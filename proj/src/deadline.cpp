#include "iotmac/deadline.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace iotmac {

namespace {

bool llf_before(const ActiveFlow& a, const ActiveFlow& b) {
  if (a.laxity() != b.laxity()) return a.laxity() < b.laxity();
  if (a.deadline_slots != b.deadline_slots)
    return a.deadline_slots < b.deadline_slots;
  return a.id < b.id;
}

// Indices of the flows LLF serves in one slot.
std::vector<std::size_t> pick_least_lax(const std::vector<ActiveFlow>& flows,
                                        int channels) {
  const std::size_t take =
      std::min<std::size_t>(std::max(channels, 0), flows.size());
  std::vector<std::size_t> idx(flows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + take, idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return llf_before(flows[a], flows[b]);
                    });
  idx.resize(take);
  return idx;
}

}  // namespace

std::vector<std::uint64_t> llf_step(std::span<const ActiveFlow> flows,
                                    int channels) {
  std::vector<ActiveFlow> copy(flows.begin(), flows.end());
  std::vector<std::uint64_t> ids;
  for (std::size_t i : pick_least_lax(copy, channels)) ids.push_back(copy[i].id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool llf_feasible(std::vector<ActiveFlow> flows, int channels) {
  std::erase_if(flows, [](const ActiveFlow& f) { return f.load <= 0; });
  for (const ActiveFlow& f : flows)
    if (f.laxity() < 0) return false;
  if (flows.empty()) return true;

  int horizon = 0;
  for (const ActiveFlow& f : flows) horizon = std::max(horizon, f.deadline_slots);

  for (int s = 0; s < horizon; ++s) {
    for (std::size_t i : pick_least_lax(flows, channels)) --flows[i].load;
    for (ActiveFlow& f : flows) --f.deadline_slots;
    std::erase_if(flows, [](const ActiveFlow& f) { return f.load == 0; });
    if (flows.empty()) return true;
    for (const ActiveFlow& f : flows)
      if (f.laxity() < 0) return false;
  }
  return flows.empty();
}

bool maxflow_feasible(std::span<const ActiveFlow> flows, int channels) {
  long long demand = 0;
  int max_deadline = 0;
  for (const ActiveFlow& f : flows) {
    demand += std::max(f.load, 0);
    max_deadline = std::max(max_deadline, f.deadline_slots);
  }
  if (demand == 0) return true;
  if (channels < 1) return false;
  if (max_deadline > 100000)
    throw std::invalid_argument("maxflow_feasible: deadline horizon too large");

  // Node layout: 0 = source, 1..n = flows, n+1..n+D = slots, n+D+1 = sink.
  const int n = static_cast<int>(flows.size());
  const int slot0 = n + 1;
  const int sink = slot0 + max_deadline;

  struct Edge {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Edge>> g(sink + 1);
  auto add_edge = [&](int u, int v, int cap) {
    g[u].push_back(Edge{v, cap, static_cast<int>(g[v].size())});
    g[v].push_back(Edge{u, 0, static_cast<int>(g[u].size()) - 1});
  };

  for (int i = 0; i < n; ++i) {
    if (flows[i].load <= 0) continue;
    add_edge(0, 1 + i, flows[i].load);
    for (int s = 0; s < std::min(flows[i].deadline_slots, max_deadline); ++s)
      add_edge(1 + i, slot0 + s, 1);
  }
  for (int s = 0; s < max_deadline; ++s) add_edge(slot0 + s, sink, channels);

  // Edmonds-Karp.
  long long flow = 0;
  std::vector<int> prev_node(sink + 1), prev_edge(sink + 1);
  while (true) {
    std::fill(prev_node.begin(), prev_node.end(), -1);
    prev_node[0] = 0;
    std::queue<int> q;
    q.push(0);
    while (!q.empty() && prev_node[sink] < 0) {
      const int u = q.front();
      q.pop();
      for (std::size_t e = 0; e < g[u].size(); ++e) {
        const Edge& ed = g[u][e];
        if (ed.cap > 0 && prev_node[ed.to] < 0) {
          prev_node[ed.to] = u;
          prev_edge[ed.to] = static_cast<int>(e);
          q.push(ed.to);
        }
      }
    }
    if (prev_node[sink] < 0) break;
    int bottleneck = std::numeric_limits<int>::max();
    for (int v = sink; v != 0; v = prev_node[v])
      bottleneck = std::min(bottleneck, g[prev_node[v]][prev_edge[v]].cap);
    for (int v = sink; v != 0; v = prev_node[v]) {
      Edge& ed = g[prev_node[v]][prev_edge[v]];
      ed.cap -= bottleneck;
      g[ed.to][ed.rev].cap += bottleneck;
    }
    flow += bottleneck;
  }
  return flow == demand;
}

AdmissionResult admission_control(std::vector<ActiveFlow> active,
                                  std::span<const AdmissionRequest> requests,
                                  int channels) {
  assert(llf_feasible(active, channels) &&
         "admission_control: active set must be feasible");

  std::vector<AdmissionRequest> sorted(requests.begin(), requests.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AdmissionRequest& a, const AdmissionRequest& b) {
                     if (a.load != b.load) return a.load < b.load;
                     return a.deadline_slots < b.deadline_slots;
                   });

  AdmissionResult res;
  res.active = std::move(active);
  for (const AdmissionRequest& r : sorted) {
    std::vector<ActiveFlow> candidate = res.active;
    candidate.push_back(ActiveFlow{r.id, r.load, r.deadline_slots});
    if (llf_feasible(candidate, channels)) {
      res.active = std::move(candidate);
      res.accepted.push_back(r.id);
    }
  }
  return res;
}

ScheduleResult build_schedule(std::vector<ActiveFlow> active, int tx_slots,
                              int channels) {
  ScheduleResult res;
  res.schedule.slots.resize(std::max(tx_slots, 0));
  for (int s = 0; s < tx_slots; ++s) {
    std::vector<std::uint64_t> ids;
    for (std::size_t i : pick_least_lax(active, channels)) {
      --active[i].load;
      ids.push_back(active[i].id);
    }
    std::sort(ids.begin(), ids.end());
    res.transmissions += static_cast<int>(ids.size());
    res.schedule.slots[s] = std::move(ids);

    for (ActiveFlow& f : active) --f.deadline_slots;
    for (const ActiveFlow& f : active)
      if (f.load == 0) res.completed.push_back(f.id);
    std::erase_if(active, [](const ActiveFlow& f) { return f.load == 0; });
    for ([[maybe_unused]] const ActiveFlow& f : active)
      assert(f.laxity() >= 0 && "build_schedule: feasible input lost a flow");
  }
  res.active = std::move(active);
  return res;
}

}  // namespace iotmac

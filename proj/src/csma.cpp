#include "iotmac/csma.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace iotmac {

namespace {

bool power_of_two(int x) { return x >= 1 && (x & (x - 1)) == 0; }

struct Node {
  std::uint64_t id;
  double deadline_abs;  // arrival + relative deadline
  int packets_left;
  int cw;
  int backoff;
  int collisions;  // successive collisions of the current packet
};

}  // namespace

void CsmaParams::validate() const {
  if (!power_of_two(cw_min) || !power_of_two(cw_max) || cw_min > cw_max)
    throw std::invalid_argument(
        "CsmaParams: cw_min and cw_max must be powers of two with cw_min <= cw_max");
  if (max_collisions < 1)
    throw std::invalid_argument("CsmaParams: max_collisions must be >= 1");
  if (packet_duration < 1)
    throw std::invalid_argument("CsmaParams: packet_duration must be >= 1");
}

BackoffDraw backoff_after_collision(int cw, int cw_max, Rng& rng) {
  if (cw > cw_max)
    throw std::invalid_argument("backoff_after_collision: cw exceeds cw_max");
  const int doubled = std::min(2 * cw, cw_max);
  std::uniform_int_distribution<int> pick(0, doubled - 1);
  return BackoffDraw{doubled, pick(rng)};
}

RunMetrics run_csma(std::span<const FlowSpec> arrivals,
                    const CsmaParams& params, double horizon, Rng& rng) {
  params.validate();
  if (!(horizon > 0.0))
    throw std::invalid_argument("run_csma: horizon must be > 0");

  const int k = params.packet_duration;
  RunMetrics metrics;
  metrics.horizon = horizon;

  std::vector<Node> waiting;
  std::vector<Node> on_air;
  std::int64_t tx_end = -1;
  std::size_t next_arrival = 0;

  auto draw_initial = [&](Rng& r) {
    std::uniform_int_distribution<int> pick(0, params.cw_min - 1);
    return pick(r);
  };

  assert(std::is_sorted(arrivals.begin(), arrivals.end(),
                        [](const FlowSpec& a, const FlowSpec& b) {
                          return a.arrival < b.arrival;
                        }) &&
         "run_csma: arrivals must be time-sorted");

  const auto ticks = static_cast<std::int64_t>(horizon);
  for (std::int64_t t = 0; t < ticks; ++t) {
    while (next_arrival < arrivals.size() &&
           arrivals[next_arrival].arrival <= static_cast<double>(t)) {
      const FlowSpec& f = arrivals[next_arrival++];
      waiting.push_back(Node{f.id, f.arrival + f.deadline, f.load,
                             params.cw_min, draw_initial(rng), 0});
    }

    if (!on_air.empty() && tx_end == t) {
      if (on_air.size() == 1) {
        Node n = on_air.front();
        --n.packets_left;
        n.collisions = 0;
        if (n.packets_left == 0) {
          if (static_cast<double>(t) <= n.deadline_abs)
            ++metrics.successes;
          else
            ++metrics.failures;
        } else if (static_cast<double>(t) > n.deadline_abs) {
          ++metrics.failures;  // missed mid-flow; no further attempts
        } else {
          n.cw = params.cw_min;
          n.backoff = draw_initial(rng);
          waiting.push_back(n);
        }
      } else {
        for (Node n : on_air) {
          ++n.collisions;
          if (n.collisions >= params.max_collisions) {
            ++metrics.failures;  // aborted to keep the channel stable
          } else {
            const BackoffDraw d = backoff_after_collision(n.cw, params.cw_max, rng);
            n.cw = d.cw;
            n.backoff = d.backoff;
            waiting.push_back(n);
          }
        }
      }
      on_air.clear();
      tx_end = -1;
    }

    // Expired waiters stop contending.
    std::erase_if(waiting, [&](const Node& n) {
      if (static_cast<double>(t) > n.deadline_abs) {
        ++metrics.failures;
        return true;
      }
      return false;
    });

    const bool busy = !on_air.empty();
    bool started = false;
    if (!busy) {
      std::vector<Node> starters;
      std::erase_if(waiting, [&](const Node& n) {
        if (n.backoff == 0) {
          starters.push_back(n);
          return true;
        }
        return false;
      });
      if (!starters.empty()) {
        started = true;
        metrics.tx_time += static_cast<double>(k) * starters.size();
        on_air = std::move(starters);
        tx_end = t + k;
      }
    }

    const bool idle_tick = !busy && !started;
    if (idle_tick || !params.freeze_backoff)
      for (Node& n : waiting)
        if (n.backoff > 0) --n.backoff;
  }

  // Flows still in the system count as failed only when their deadline fell
  // inside the horizon (the miss is a resolved event); anything with a later
  // deadline is left undecided and excluded from both counts.
  auto settle = [&](double deadline_abs) {
    if (deadline_abs <= horizon) ++metrics.failures;
  };
  for (const Node& n : waiting) settle(n.deadline_abs);
  for (const Node& n : on_air) settle(n.deadline_abs);
  for (; next_arrival < arrivals.size(); ++next_arrival)
    settle(arrivals[next_arrival].arrival + arrivals[next_arrival].deadline);

  return metrics;
}

}  // namespace iotmac

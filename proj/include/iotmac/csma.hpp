#pragma once

#include <span>

#include "iotmac/flows.hpp"
#include "iotmac/metrics.hpp"
#include "iotmac/rng.hpp"

namespace iotmac {

// Slotted CSMA/CA with binary exponential backoff on a single channel.
struct CsmaParams {
  int cw_min = 2;
  int cw_max = 16;
  int max_collisions = 3;  // successive collisions before the flow aborts
  int packet_duration = 5; // ticks per packet
  bool freeze_backoff = true;  // countdown runs only while the channel is idle

  void validate() const;  // throws std::invalid_argument
};

struct BackoffDraw {
  int cw;
  int backoff;
};

// Double the window (capped at cw_max) and draw a fresh backoff uniformly
// from {0, ..., cw-1}.
BackoffDraw backoff_after_collision(int cw, int cw_max, Rng& rng);

// Simulate one channel in unit ticks over [0, horizon). A node transmits when
// its backoff countdown reaches zero on an idle tick; transmissions starting
// on the same tick collide for their full duration. Collisions double the
// window; max_collisions successive collisions abort the flow; a flow whose
// deadline passes attempts no further transmissions. Energy counts every
// transmission tick, successful or collided. `arrivals` must be time-sorted.
RunMetrics run_csma(std::span<const FlowSpec> arrivals,
                    const CsmaParams& params, double horizon, Rng& rng);

}  // namespace iotmac

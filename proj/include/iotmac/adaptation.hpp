#pragma once

#include <cstdint>
#include <vector>

#include "iotmac/flows.hpp"
#include "iotmac/reservation.hpp"

namespace iotmac {

// Fixed-step stochastic approximation for the contention probability: drive
// the observed idle-block fraction toward 1/e, projected onto [0,1].
struct PController {
  double p = 1.0;
  double delta = 0.05;
};

// One update from the contention statistics of the frame just run:
// p <- clamp(p + delta * (idle / (channels * contention_slots) - 1/e)).
PController update_p(PController ctrl, const ContentionStats& stats,
                     const FrameConfig& cfg);

// Contention probability maximizing the expected number of successful
// admission requests when the arrival rate is known:
// min(1, channels * contention_slots / (rate * frame_len)).
double optimal_p(double rate, const FrameConfig& cfg);

// Reward of one play: accepted flows normalized by channels * frame_len *
// frames_per_play, clamped into [0,1].
double play_reward(std::int64_t accepted, const FrameConfig& cfg,
                   int frames_per_play);

// Upper confidence bound index: mean + sqrt(2 ln(total_plays) / plays).
double ucb_value(double mean_reward, int plays, int total_plays);

struct Arm {
  FrameConfig cfg;
  int plays = 0;            // m_i
  double mean_reward = 0.0; // empirical mean of this arm's rewards
  PController pctrl;        // per-arm contention probability, warm across plays
};

// UCB1 over candidate (contention_slots, tx_slots) splits of a fixed frame.
class UcbState {
 public:
  UcbState(std::vector<FrameConfig> arm_configs, int frames_per_play,
           double delta);

  // Lowest-indexed unplayed arm first; afterwards the argmax of ucb_value
  // with ties broken by lower index.
  std::size_t select() const;

  // Running-mean update. Throws std::invalid_argument for reward outside
  // [0,1].
  void update(std::size_t arm, double reward);

  std::size_t size() const { return arms_.size(); }
  Arm& arm(std::size_t i) { return arms_.at(i); }
  const Arm& arm(std::size_t i) const { return arms_.at(i); }
  int total_plays() const { return total_plays_; }
  int frames_per_play() const { return frames_per_play_; }

 private:
  std::vector<Arm> arms_;
  int total_plays_ = 0;
  int frames_per_play_ = 50;
};

}  // namespace iotmac

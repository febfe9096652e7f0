#include "iotmac/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace iotmac {

namespace {
constexpr double kInvE = 0.36787944117144233;  // 1/e
}

PController update_p(PController ctrl, const ContentionStats& stats,
                     const FrameConfig& cfg) {
  const double idle_fraction =
      static_cast<double>(stats.idle) / cfg.contention_blocks();
  ctrl.p = std::clamp(ctrl.p + ctrl.delta * (idle_fraction - kInvE), 0.0, 1.0);
  return ctrl;
}

double optimal_p(double rate, const FrameConfig& cfg) {
  if (!(rate > 0.0)) throw std::invalid_argument("optimal_p: rate must be > 0");
  return std::min(1.0, cfg.contention_blocks() /
                           (rate * static_cast<double>(cfg.frame_len())));
}

double play_reward(std::int64_t accepted, const FrameConfig& cfg,
                   int frames_per_play) {
  if (accepted < 0)
    throw std::invalid_argument("play_reward: accepted must be >= 0");
  const double denom = static_cast<double>(cfg.channels) * cfg.frame_len() *
                       frames_per_play;
  const double reward = static_cast<double>(accepted) / denom;
  if (reward > 1.0) {
    // Cannot happen within the capacity bound; clamp but leave a trace.
    std::cerr << "play_reward: accepted count " << accepted
              << " exceeds the normalization bound " << denom << "\n";
    return 1.0;
  }
  return reward;
}

double ucb_value(double mean_reward, int plays, int total_plays) {
  return mean_reward +
         std::sqrt(2.0 * std::log(static_cast<double>(total_plays)) / plays);
}

UcbState::UcbState(std::vector<FrameConfig> arm_configs, int frames_per_play,
                   double delta)
    : frames_per_play_(frames_per_play) {
  if (arm_configs.empty())
    throw std::invalid_argument("UcbState: arm set must not be empty");
  if (frames_per_play < 1)
    throw std::invalid_argument("UcbState: frames_per_play must be >= 1");
  if (!(delta > 0.0))
    throw std::invalid_argument("UcbState: delta must be > 0");
  for (FrameConfig& cfg : arm_configs) {
    cfg.validate();
    Arm a;
    a.cfg = cfg;
    a.pctrl = PController{1.0, delta};
    arms_.push_back(a);
  }
}

std::size_t UcbState::select() const {
  for (std::size_t i = 0; i < arms_.size(); ++i)
    if (arms_[i].plays == 0) return i;
  std::size_t best = 0;
  double best_value = ucb_value(arms_[0].mean_reward, arms_[0].plays, total_plays_);
  for (std::size_t i = 1; i < arms_.size(); ++i) {
    const double v = ucb_value(arms_[i].mean_reward, arms_[i].plays, total_plays_);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

void UcbState::update(std::size_t arm, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::invalid_argument("UcbState::update: reward must lie in [0,1]");
  Arm& a = arms_.at(arm);
  ++a.plays;
  ++total_plays_;
  a.mean_reward += (reward - a.mean_reward) / a.plays;
}

}  // namespace iotmac

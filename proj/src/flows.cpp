#include "iotmac/flows.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iotmac {

void FrameConfig::validate() const {
  if (channels < 1) throw std::invalid_argument("FrameConfig: channels must be >= 1");
  if (contention_slots < 1)
    throw std::invalid_argument("FrameConfig: contention_slots must be >= 1");
  if (tx_slots < 1) throw std::invalid_argument("FrameConfig: tx_slots must be >= 1");
  if (slot_len < 2) throw std::invalid_argument("FrameConfig: slot_len must be an integer > 1");
}

LoadModel LoadModel::deterministic(int packets, int slack_min, int slack_max) {
  LoadModel m;
  m.kind = Kind::deterministic;
  m.value = packets;
  m.slack_min = slack_min;
  m.slack_max = slack_max;
  m.validate();
  return m;
}

LoadModel LoadModel::geometric(double mean, int slack_min, int slack_max) {
  LoadModel m;
  m.kind = Kind::geometric;
  m.value = mean;
  m.slack_min = slack_min;
  m.slack_max = slack_max;
  m.validate();
  return m;
}

void LoadModel::validate() const {
  if (kind == Kind::deterministic) {
    if (value < 1.0 || value != std::floor(value))
      throw std::invalid_argument("LoadModel: deterministic load must be a whole packet count >= 1");
  } else {
    if (!(value >= 1.0))
      throw std::invalid_argument("LoadModel: geometric mean must be >= 1 (support is {1,2,...})");
  }
  if (slack_min < 1 || slack_max < slack_min)
    throw std::invalid_argument("LoadModel: slack bounds must satisfy 0 < slack_min <= slack_max");
}

int LoadModel::sample_load(Rng& rng) const {
  if (kind == Kind::deterministic) return static_cast<int>(value);
  if (value == 1.0) return 1;  // degenerate geometric
  std::geometric_distribution<int> failures(1.0 / value);
  return 1 + failures(rng);
}

int LoadModel::sample_slack(Rng& rng) const {
  std::uniform_int_distribution<int> slack(slack_min, slack_max);
  return slack(rng);
}

double LoadModel::mean_load() const { return value; }

std::vector<FlowSpec> generate_arrivals(double rate, double horizon,
                                        const LoadModel& model, int slot_len,
                                        Rng& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("generate_arrivals: rate must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("generate_arrivals: horizon must be > 0");
  if (slot_len < 2) throw std::invalid_argument("generate_arrivals: slot_len must be > 1");
  model.validate();

  std::exponential_distribution<double> gap(rate);
  std::vector<FlowSpec> out;
  double t = gap(rng);
  std::uint64_t id = 1;
  while (t < horizon) {
    const int load = model.sample_load(rng);
    const int slack = model.sample_slack(rng);
    out.push_back(FlowSpec{id++, t, load,
                           static_cast<double>((load + slack) * slot_len)});
    t += gap(rng);
  }
  return out;
}

std::optional<int> deadline_to_slots(double absolute_deadline, double now,
                                     const FrameConfig& cfg) {
  const double x = absolute_deadline - now;
  if (x < 0.0) return std::nullopt;
  const double frame = cfg.frame_len();
  const double full = std::floor(x / frame);
  const double rem = std::max(0.0, x - full * frame);
  const int partial =
      std::min(cfg.tx_slots, static_cast<int>(std::floor(rem / cfg.slot_len)));
  return static_cast<int>(full) * cfg.tx_slots + partial;
}

ArrivalStream::ArrivalStream(double rate, const LoadModel& model, int slot_len,
                             Rng rng)
    : rate_(rate), model_(model), slot_len_(slot_len), rng_(std::move(rng)) {
  if (!(rate > 0.0)) throw std::invalid_argument("ArrivalStream: rate must be > 0");
  if (slot_len < 2) throw std::invalid_argument("ArrivalStream: slot_len must be > 1");
  model_.validate();
  staged_.arrival = 0.0;
  stage_next_();
}

void ArrivalStream::stage_next_() {
  std::exponential_distribution<double> gap(rate_);
  const double t = staged_.arrival + gap(rng_);
  const int load = model_.sample_load(rng_);
  const int slack = model_.sample_slack(rng_);
  staged_ = FlowSpec{next_id_++, t, load,
                     static_cast<double>((load + slack) * slot_len_)};
}

std::vector<FlowSpec> ArrivalStream::take_until(double t) {
  std::vector<FlowSpec> out;
  while (staged_.arrival < t) {
    out.push_back(staged_);
    stage_next_();
  }
  return out;
}

}  // namespace iotmac

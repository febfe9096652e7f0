#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "iotmac/deadline.hpp"
#include "iotmac/rng.hpp"

namespace testutil {

inline double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(xs.size()) - 1));
}

// Wilson-Hilferty approximation of the chi-square 0.99 quantile.
inline double chi2_critical_99(int dof) {
  const double k = dof;
  const double z = 2.3263478740408408;  // Phi^{-1}(0.99)
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

// Pearson goodness-of-fit statistic with tail bins merged until every
// expected count is at least 5. Returns false when the statistic exceeds the
// 0.99 quantile for the resulting degrees of freedom.
inline bool chi2_gof_ok(const std::vector<double>& observed,
                        const std::vector<double>& expected) {
  std::vector<double> obs, exp;
  double o_acc = 0, e_acc = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0;
    }
  }
  if (e_acc > 0) {
    if (exp.empty()) return true;  // nothing testable
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  if (obs.size() < 2) return true;
  double stat = 0;
  for (std::size_t i = 0; i < obs.size(); ++i)
    stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  return stat < chi2_critical_99(static_cast<int>(obs.size()) - 1);
}

// Exhaustive scheduling oracle for tiny instances: tries every maximal
// per-slot assignment. Serving fewer flows than possible never helps, so
// only subsets of size min(channels, alive) are explored.
inline bool brute_force_feasible(std::vector<std::pair<int, int>> flows,
                                 int channels,
                                 std::map<std::vector<std::pair<int, int>>, bool>* memo) {
  std::erase_if(flows, [](const auto& f) { return f.first <= 0; });
  if (flows.empty()) return true;
  for (const auto& [l, d] : flows)
    if (l > d) return false;
  std::sort(flows.begin(), flows.end());
  if (auto it = memo->find(flows); it != memo->end()) return it->second;

  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(channels), flows.size());
  std::vector<std::size_t> combo(take);
  bool feasible = false;

  const auto recurse = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (feasible) return;
    if (depth == take) {
      std::vector<std::pair<int, int>> next = flows;
      for (std::size_t i : combo) --next[i].first;
      for (auto& f : next) --f.second;
      if (brute_force_feasible(std::move(next), channels, memo)) feasible = true;
      return;
    }
    for (std::size_t i = start; i + (take - depth) <= flows.size(); ++i) {
      combo[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);

  (*memo)[flows] = feasible;
  return feasible;
}

inline std::vector<iotmac::ActiveFlow> random_instance(iotmac::Rng& rng,
                                                       int max_flows, int max_load,
                                                       int max_deadline) {
  std::uniform_int_distribution<int> count(0, max_flows);
  std::uniform_int_distribution<int> load(1, max_load);
  std::uniform_int_distribution<int> deadline(0, max_deadline);
  std::vector<iotmac::ActiveFlow> flows;
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    flows.push_back(iotmac::ActiveFlow{static_cast<std::uint64_t>(i + 1),
                                       load(rng), deadline(rng)});
  return flows;
}

}  // namespace testutil

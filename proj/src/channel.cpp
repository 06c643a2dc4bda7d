#include "d2dsched/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace d2dsched {

PowerRatePoint required_power(const D2DPair& pair, FadingSample h2,
                              std::size_t m, const ScenarioConfig& cfg,
                              const AmcTable& table) {
  if (m >= table.size())
    throw std::out_of_range("required_power: AMC index out of range");
  const AmcEntry& entry = table.entry(m);
  double n_o = cfg.noise_power_w();
  // Received SNR = P*|h|^2 / (L*N_o); invert for the threshold.
  double uncapped = entry.snr_threshold_linear * n_o * pair.path_loss_linear /
                    h2.h_squared;
  bool feasible = uncapped <= cfg.p_max_w;
  return {m, std::min(uncapped, cfg.p_max_w), entry.rate_bps, feasible};
}

std::vector<PowerRatePoint> achievable_set(const D2DPair& pair,
                                           FadingSample h2,
                                           const ScenarioConfig& cfg,
                                           const AmcTable& table) {
  std::vector<PowerRatePoint> points;
  points.reserve(table.size());
  for (std::size_t m = 0; m < table.size(); ++m)
    points.push_back(required_power(pair, h2, m, cfg, table));
  return points;
}

}  // namespace d2dsched

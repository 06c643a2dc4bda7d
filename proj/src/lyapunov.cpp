#include "d2dsched/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2dsched {

VirtualQueue queue_update(VirtualQueue q, double served_rate, double r_th) {
  if (served_rate < 0.0)
    throw std::invalid_argument("queue_update: served_rate must be >= 0");
  return {std::max(q.backlog - served_rate, 0.0) + r_th};
}

MetricValue metric_v(const D2DPair& pair, FadingSample h2, VirtualQueue q,
                     const LyapunovParams& params, const ScenarioConfig& cfg,
                     const AmcTable& table) {
  MetricValue best{std::numeric_limits<double>::infinity(), std::nullopt};
  for (std::size_t m = 0; m < table.size(); ++m) {
    PowerRatePoint p = required_power(pair, h2, m, cfg, table);
    if (!p.feasible) break;  // thresholds increase, so so does the power
    double v = params.v_weight * p.power_w - q.backlog * p.rate_bps;
    if (v < best.v) best = {v, m};
  }
  return best;
}

std::pair<double, double> metric_bounds(const LyapunovParams& params,
                                        const ScenarioConfig& cfg,
                                        const AmcTable& table, int k2) {
  if (params.slot < 1)
    throw std::invalid_argument("metric_bounds: slot must be >= 1");
  if (k2 < 2) throw std::invalid_argument("metric_bounds: k2 must be >= 2");
  double v_min = -static_cast<double>(params.slot) * cfg.r_th_bps *
                 table.max_rate_bps();
  double span = params.v_weight * cfg.p_max_w -
                cfg.r_th_bps * table.min_rate_bps() - v_min;
  double v_max = v_min + params.r * span /
                             std::pow(static_cast<double>(k2), params.f);
  return {v_min, v_max};
}

}  // namespace d2dsched

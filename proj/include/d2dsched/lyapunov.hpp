#ifndef D2DSCHED_LYAPUNOV_HPP
#define D2DSCHED_LYAPUNOV_HPP

#include <optional>
#include <utility>

#include "d2dsched/channel.hpp"
#include "d2dsched/scenario.hpp"

namespace d2dsched {

// Virtual queue tracking the per-pair rate constraint. Backlog stays >= 0
// and starts at 0.
struct VirtualQueue {
  double backlog = 0.0;
};

// Q(t+1) = [Q(t) - R(t)]^+ + R_th.
VirtualQueue queue_update(VirtualQueue q, double served_rate, double r_th);

// State of the utility mapping shared by all devices: the Lyapunov weight V,
// the mapping shape parameters (r, f), and the slot index t within the
// current period (1-based, reset every T_p slots).
struct LyapunovParams {
  double v_weight = 1.0;
  int r = 1;
  int f = 0;
  int slot = 1;
};

struct MetricValue {
  double v = 0.0;                 // +inf when no AMC point is feasible
  std::optional<std::size_t> m_star;
};

// v_n = min over feasible m of V*P_{n,m} - Q_n*R_m.
MetricValue metric_v(const D2DPair& pair, FadingSample h2, VirtualQueue q,
                     const LyapunovParams& params, const ScenarioConfig& cfg,
                     const AmcTable& table);

// v_min = -t*R_th*R_M and
// v_max = v_min + r*(V*P_max - R_th*R_1 - v_min)/K2^f.
// Pure in its inputs: every device computing this gets the same bounds.
std::pair<double, double> metric_bounds(const LyapunovParams& params,
                                        const ScenarioConfig& cfg,
                                        const AmcTable& table, int k2);

}  // namespace d2dsched

#endif  // D2DSCHED_LYAPUNOV_HPP

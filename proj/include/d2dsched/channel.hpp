#ifndef D2DSCHED_CHANNEL_HPP
#define D2DSCHED_CHANNEL_HPP

#include <vector>

#include "d2dsched/rng.hpp"
#include "d2dsched/scenario.hpp"

namespace d2dsched {

// Squared magnitude of the slot's Rayleigh coefficient, Exp(1) across slots.
struct FadingSample {
  double h_squared = 1.0;
};

inline FadingSample sample_fading(Rng& rng) { return {rng.exp_unit()}; }

// Power needed to hit AMC point m, capped at P_max. A capped point cannot
// reach the SNR threshold, so it delivers no decodable rate: feasible=false
// and such points are excluded from every utility minimization.
struct PowerRatePoint {
  std::size_t m = 0;
  double power_w = 0.0;
  double rate_bps = 0.0;
  bool feasible = false;
};

PowerRatePoint required_power(const D2DPair& pair, FadingSample h2,
                              std::size_t m, const ScenarioConfig& cfg,
                              const AmcTable& table);

// One point per AMC index. Feasibility is a prefix property: the required
// power grows with the threshold, so once it caps it stays capped.
std::vector<PowerRatePoint> achievable_set(const D2DPair& pair,
                                           FadingSample h2,
                                           const ScenarioConfig& cfg,
                                           const AmcTable& table);

}  // namespace d2dsched

#endif  // D2DSCHED_CHANNEL_HPP

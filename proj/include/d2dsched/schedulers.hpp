#ifndef D2DSCHED_SCHEDULERS_HPP
#define D2DSCHED_SCHEDULERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "d2dsched/feedback.hpp"
#include "d2dsched/lyapunov.hpp"
#include "d2dsched/rng.hpp"
#include "d2dsched/scenario.hpp"

namespace d2dsched {

enum class Policy { kIdeal, kCentralized, kDistributed, kRoundRobin };

Policy policy_from_string(const std::string& name);
std::string to_string(Policy policy);

// What one slot produced under one policy.
struct SlotOutcome {
  Policy policy = Policy::kIdeal;
  std::optional<int> scheduled;        // winning pair id
  double power_w = 0.0;                // true transmit power spent
  double rate_bps = 0.0;               // delivered rate (an AMC entry or 0)
  std::optional<int> collision_index;  // distributed only
  int feedback_cost = 0;               // reports/indicators sent this slot
};

struct CentralizedState {
  std::vector<int> subset;  // Lambda*, <= K1 distinct pair ids
};

// Exact per-pair argmin of v_n; ties to the lowest id. Needs global CSI,
// costs no feedback.
SlotOutcome ideal_schedule(const std::vector<D2DPair>& pairs,
                           const std::vector<FadingSample>& fading,
                           const std::vector<VirtualQueue>& queues,
                           const LyapunovParams& params,
                           const ScenarioConfig& cfg, const AmcTable& table);

// Greedy forward selection of <= K1 pairs minimizing a Monte-Carlo estimate
// of E_h[min_n v_n], with the same fading draws shared across candidates
// (common random numbers).
CentralizedState select_subset(const std::vector<D2DPair>& pairs,
                               const std::vector<VirtualQueue>& queues,
                               const LyapunovParams& params,
                               const ScenarioConfig& cfg,
                               const AmcTable& table, int k1, Rng& rng);

// Subset members report (quantized power, rate); the base station picks the
// argmin of V*P~ - Q*R. The winner transmits at its true power.
SlotOutcome centralized_schedule(const CentralizedState& state,
                                 const std::vector<D2DPair>& pairs,
                                 const std::vector<FadingSample>& fading,
                                 const std::vector<VirtualQueue>& queues,
                                 const LyapunovParams& params,
                                 const ScenarioConfig& cfg,
                                 const AmcTable& table);

// Channel-indexing feedback: quantize each feasible pair's metric onto the
// K2 RE grid, resolve the frame, refine the mapping on collision. Returns
// the outcome and the (possibly updated) mapping parameters.
std::pair<SlotOutcome, LyapunovParams> distributed_schedule(
    const std::vector<D2DPair>& pairs,
    const std::vector<FadingSample>& fading,
    const std::vector<VirtualQueue>& queues, const LyapunovParams& params,
    const ScenarioConfig& cfg, const AmcTable& table, int k2,
    FeedbackFrame* frame_out = nullptr);

// Fixed circular blocks of K1 consecutive ids; selection within the block
// follows the centralized rule.
SlotOutcome round_robin_schedule(long long slot,
                                 const std::vector<D2DPair>& pairs,
                                 const std::vector<FadingSample>& fading,
                                 const std::vector<VirtualQueue>& queues,
                                 const LyapunovParams& params,
                                 const ScenarioConfig& cfg,
                                 const AmcTable& table, int k1);

// Smallest grid element >= power, clamped to the largest (ceiling rule).
double quantize_power(double power_w, const std::vector<double>& grid);

}  // namespace d2dsched

#endif  // D2DSCHED_SCHEDULERS_HPP

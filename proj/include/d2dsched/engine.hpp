#ifndef D2DSCHED_ENGINE_HPP
#define D2DSCHED_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "d2dsched/schedulers.hpp"

namespace d2dsched {

struct EngineConfig {
  long long slots = 20000;
  int realizations = 10;
  bool paired_fading = true;
  std::uint64_t base_seed = 1;
  double warmup_fraction = 0.2;
  int jobs = 1;
};

// Long-run accounting for one realization of one policy.
struct RunMetrics {
  Policy policy = Policy::kIdeal;
  std::uint64_t seed = 0;
  double gamma_th_db = 0.0;
  long long slots = 0;              // post-warmup window length
  double total_energy_j = 0.0;
  double total_bits = 0.0;
  std::vector<double> per_pair_avg_rate_bps;
  double avg_sum_queue = 0.0;
  double avg_power_w = 0.0;
  long long collision_count = 0;
  double scheduled_slot_fraction = 0.0;
  long long feedback_total = 0;
  // Quarter means of the summed backlog, for drift checks.
  double sum_queue_q3_mean = 0.0;
  double sum_queue_q4_mean = 0.0;

  double energy_efficiency() const {
    return total_energy_j > 0.0 ? total_bits / total_energy_j : 0.0;
  }
};

// Mutable per-realization state owned by the engine.
struct SimState {
  std::vector<D2DPair> pairs;
  std::vector<VirtualQueue> queues;
  LyapunovParams params;      // (r, f, t) mapping state, distributed only
  long long slot = 0;         // absolute slot index, 0-based
};

SimState init_state(const ScenarioConfig& cfg, std::uint64_t scenario_seed,
                    const AmcTable& table);

// One slot: fading draw, policy decision, queue updates. Fading is a pure
// function of (channel_seed, slot, pair), so policies sharing channel_seed
// see identical channels (paired comparison).
SlotOutcome run_slot(SimState& state, Policy policy, const ScenarioConfig& cfg,
                     const AmcTable& table, std::uint64_t channel_seed,
                     Rng& policy_rng, FeedbackFrame* frame_out = nullptr);

// Full per-slot record, written only when tracing is requested.
struct TraceRow {
  long long slot = 0;
  SlotOutcome outcome;
  FeedbackFrame frame;  // distributed only; empty otherwise
};

RunMetrics run_realization(const ScenarioConfig& cfg,
                           const EngineConfig& engine_cfg, Policy policy,
                           int realization, const AmcTable& table,
                           std::vector<TraceRow>* trace = nullptr);

struct SummaryRow {
  double gamma_th_db = 0.0;
  Policy policy = Policy::kIdeal;
  int realizations = 0;
  double mean_avg_power_w = 0.0;
  double ci95_avg_power_w = 0.0;
  double mean_ee_bits_per_j = 0.0;
  double ci95_ee_bits_per_j = 0.0;
  double mean_collision_rate = 0.0;
  double ec_reduction_vs_round_robin_pct = 0.0;
};

struct ComparisonResult {
  std::vector<RunMetrics> runs;       // realization-major, fixed order
  std::vector<SummaryRow> summary;
};

// Sweep gamma_th over the given points for every policy, paired fading per
// the engine flag, parallel over (gamma, policy, realization) tasks.
// Results are independent of the job count.
ComparisonResult compare_policies(const ScenarioConfig& cfg,
                                  const EngineConfig& engine_cfg,
                                  const std::vector<Policy>& policies,
                                  const std::vector<double>& gamma_sweep_db,
                                  const AmcTable& full_table);

std::string runs_csv(const std::vector<RunMetrics>& runs);
std::string summary_csv(const std::vector<SummaryRow>& rows);

// Seed derivation: realization seeds from the base seed via splitmix.
std::uint64_t realization_seed(std::uint64_t base_seed, int realization);

}  // namespace d2dsched

#endif  // D2DSCHED_ENGINE_HPP

#include "d2dsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2dsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Selection among reporting members by V*P~ - Q*R (quantized power);
// the winner spends its true power. Shared by centralized and round-robin.
SlotOutcome pick_from_subset(Policy policy, const std::vector<int>& subset,
                             const std::vector<D2DPair>& pairs,
                             const std::vector<FadingSample>& fading,
                             const std::vector<VirtualQueue>& queues,
                             const LyapunovParams& params,
                             const ScenarioConfig& cfg,
                             const AmcTable& table) {
  SlotOutcome out;
  out.policy = policy;
  out.feedback_cost = static_cast<int>(subset.size());
  double best = kInf;
  for (int id : subset) {
    const auto& pair = pairs[static_cast<std::size_t>(id)];
    MetricValue mv = metric_v(pair, fading[static_cast<std::size_t>(id)],
                              queues[static_cast<std::size_t>(id)], params,
                              cfg, table);
    if (!mv.m_star) continue;  // nothing decodable, no report
    PowerRatePoint p =
        required_power(pair, fading[static_cast<std::size_t>(id)], *mv.m_star,
                       cfg, table);
    double reported = params.v_weight *
                          quantize_power(p.power_w, cfg.quantized_powers_w) -
                      queues[static_cast<std::size_t>(id)].backlog * p.rate_bps;
    if (reported < best) {
      best = reported;
      out.scheduled = id;
      out.power_w = p.power_w;
      out.rate_bps = p.rate_bps;
    }
  }
  return out;
}

}  // namespace

Policy policy_from_string(const std::string& name) {
  if (name == "ideal") return Policy::kIdeal;
  if (name == "centralized") return Policy::kCentralized;
  if (name == "distributed") return Policy::kDistributed;
  if (name == "round-robin") return Policy::kRoundRobin;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::kIdeal: return "ideal";
    case Policy::kCentralized: return "centralized";
    case Policy::kDistributed: return "distributed";
    case Policy::kRoundRobin: return "round-robin";
  }
  return "?";
}

double quantize_power(double power_w, const std::vector<double>& grid) {
  for (double g : grid)
    if (g >= power_w) return g;
  return grid.back();
}

SlotOutcome ideal_schedule(const std::vector<D2DPair>& pairs,
                           const std::vector<FadingSample>& fading,
                           const std::vector<VirtualQueue>& queues,
                           const LyapunovParams& params,
                           const ScenarioConfig& cfg, const AmcTable& table) {
  SlotOutcome out;
  out.policy = Policy::kIdeal;
  double best = kInf;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    MetricValue mv = metric_v(pairs[n], fading[n], queues[n], params, cfg,
                              table);
    if (mv.m_star && mv.v < best) {
      best = mv.v;
      out.scheduled = pairs[n].id;
      PowerRatePoint p = required_power(pairs[n], fading[n], *mv.m_star, cfg,
                                        table);
      out.power_w = p.power_w;
      out.rate_bps = p.rate_bps;
    }
  }
  return out;
}

CentralizedState select_subset(const std::vector<D2DPair>& pairs,
                               const std::vector<VirtualQueue>& queues,
                               const LyapunovParams& params,
                               const ScenarioConfig& cfg,
                               const AmcTable& table, int k1, Rng& rng) {
  const std::size_t n_pairs = pairs.size();
  const std::size_t samples =
      static_cast<std::size_t>(cfg.mc_subset_samples);
  // v[n][s] on a shared fading sample set; +inf when pair n has no feasible
  // point in draw s, matching the per-slot sentinel.
  std::vector<std::vector<double>> v(n_pairs, std::vector<double>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t n = 0; n < n_pairs; ++n) {
      FadingSample h2{rng.exp_unit()};
      v[n][s] = metric_v(pairs[n], h2, queues[n], params, cfg, table).v;
    }
  }

  CentralizedState state;
  std::vector<bool> chosen(n_pairs, false);
  std::vector<double> current_min(samples, kInf);
  for (int round = 0; round < k1 && state.subset.size() < n_pairs; ++round) {
    int best_id = -1;
    double best_score = kInf;
    for (std::size_t n = 0; n < n_pairs; ++n) {
      if (chosen[n]) continue;
      double acc = 0.0;
      for (std::size_t s = 0; s < samples; ++s) {
        // A sample where no member is feasible schedules nobody: cost 0.
        double c = std::min(current_min[s], v[n][s]);
        acc += std::isfinite(c) ? c : 0.0;
      }
      double score = acc / static_cast<double>(samples);
      if (score < best_score) {  // strict: ties stay with the lowest id
        best_score = score;
        best_id = static_cast<int>(n);
      }
    }
    if (best_id < 0) break;
    chosen[static_cast<std::size_t>(best_id)] = true;
    state.subset.push_back(best_id);
    for (std::size_t s = 0; s < samples; ++s)
      current_min[s] =
          std::min(current_min[s], v[static_cast<std::size_t>(best_id)][s]);
  }
  std::sort(state.subset.begin(), state.subset.end());
  return state;
}

SlotOutcome centralized_schedule(const CentralizedState& state,
                                 const std::vector<D2DPair>& pairs,
                                 const std::vector<FadingSample>& fading,
                                 const std::vector<VirtualQueue>& queues,
                                 const LyapunovParams& params,
                                 const ScenarioConfig& cfg,
                                 const AmcTable& table) {
  return pick_from_subset(Policy::kCentralized, state.subset, pairs, fading,
                          queues, params, cfg, table);
}

std::pair<SlotOutcome, LyapunovParams> distributed_schedule(
    const std::vector<D2DPair>& pairs,
    const std::vector<FadingSample>& fading,
    const std::vector<VirtualQueue>& queues, const LyapunovParams& params,
    const ScenarioConfig& cfg, const AmcTable& table, int k2,
    FeedbackFrame* frame_out) {
  SlotOutcome out;
  out.policy = Policy::kDistributed;

  auto [v_min, v_max] = metric_bounds(params, cfg, table, k2);
  // Repeated refinement divides the span by k2^f; once it shrinks below
  // double resolution around v_min the grid would degenerate, so keep a
  // minimal representable width.
  double min_span = std::max(std::abs(v_min), 1.0) * 1e-9;
  if (!(v_max - v_min > min_span)) v_max = v_min + min_span;
  IndexingMap map = build_map(v_min, v_max, k2);

  std::vector<std::pair<int, int>> placements;            // (pair id, RE)
  std::vector<std::optional<std::size_t>> m_star(pairs.size());
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    MetricValue mv = metric_v(pairs[n], fading[n], queues[n], params, cfg,
                              table);
    m_star[n] = mv.m_star;
    if (!mv.m_star) continue;  // infeasible pairs send no indicator
    placements.emplace_back(pairs[n].id, quantize(mv.v, map).second);
  }
  out.feedback_cost = static_cast<int>(placements.size());

  FeedbackFrame frame = assemble_frame(placements);
  if (frame_out) *frame_out = frame;
  FrameResolution res = resolve_frame(frame);
  out.collision_index = res.collision_index;
  if (res.winner) {
    std::size_t n = static_cast<std::size_t>(*res.winner);
    PowerRatePoint p =
        required_power(pairs[n], fading[n], *m_star[n], cfg, table);
    out.scheduled = *res.winner;
    out.power_w = p.power_w;
    out.rate_bps = p.rate_bps;
  }

  LyapunovParams next = params;
  if (res.collision_index)
    next = update_mapping(next, *res.collision_index, k2);
  return {out, next};
}

SlotOutcome round_robin_schedule(long long slot,
                                 const std::vector<D2DPair>& pairs,
                                 const std::vector<FadingSample>& fading,
                                 const std::vector<VirtualQueue>& queues,
                                 const LyapunovParams& params,
                                 const ScenarioConfig& cfg,
                                 const AmcTable& table, int k1) {
  const int n = static_cast<int>(pairs.size());
  const int block = std::min(k1, n);
  int start = static_cast<int>((slot * block) % n);
  std::vector<int> subset;
  subset.reserve(static_cast<std::size_t>(block));
  for (int i = 0; i < block; ++i) subset.push_back((start + i) % n);
  return pick_from_subset(Policy::kRoundRobin, subset, pairs, fading, queues,
                          params, cfg, table);
}

}  // namespace d2dsched

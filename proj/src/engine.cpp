#include "d2dsched/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "d2dsched/feedback.hpp"

namespace d2dsched {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double mean(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

double ci95_halfwidth(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t base_seed, int realization) {
  return hash_combine(base_seed, 0x7265616cULL + static_cast<std::uint64_t>(realization));
}

SimState init_state(const ScenarioConfig& cfg, std::uint64_t scenario_seed,
                    const AmcTable& table) {
  (void)table;
  SimState state;
  Rng rng(scenario_seed);
  state.pairs = drop_pairs(cfg, rng);
  state.queues.assign(state.pairs.size(), VirtualQueue{});
  state.params = LyapunovParams{cfg.v_weight, 1, 0, 1};
  state.slot = 0;
  return state;
}

SlotOutcome run_slot(SimState& state, Policy policy, const ScenarioConfig& cfg,
                     const AmcTable& table, std::uint64_t channel_seed,
                     Rng& policy_rng, FeedbackFrame* frame_out) {
  const std::size_t n = state.pairs.size();
  std::vector<FadingSample> fading(n);
  for (std::size_t i = 0; i < n; ++i)
    fading[i].h_squared = counter_exp(
        channel_seed, static_cast<std::uint64_t>(state.slot), i, 0);

  FeedbackCapacity cap = capacities(cfg);
  SlotOutcome out;
  switch (policy) {
    case Policy::kIdeal:
      out = ideal_schedule(state.pairs, fading, state.queues, state.params,
                           cfg, table);
      break;
    case Policy::kCentralized: {
      CentralizedState sel = select_subset(state.pairs, state.queues,
                                           state.params, cfg, table, cap.k1,
                                           policy_rng);
      out = centralized_schedule(sel, state.pairs, fading, state.queues,
                                 state.params, cfg, table);
      break;
    }
    case Policy::kDistributed: {
      auto [o, next] = distributed_schedule(state.pairs, fading, state.queues,
                                            state.params, cfg, table, cap.k2,
                                            frame_out);
      out = o;
      state.params = next;
      break;
    }
    case Policy::kRoundRobin:
      out = round_robin_schedule(state.slot, state.pairs, fading, state.queues,
                                 state.params, cfg, table, cap.k1);
      break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    double served = (out.scheduled && *out.scheduled == state.pairs[i].id)
                        ? out.rate_bps
                        : 0.0;
    state.queues[i] = queue_update(state.queues[i], served, cfg.r_th_bps);
  }

  ++state.slot;
  // The mapping slot counter resets each period of T_p, together with the
  // (r, f) shape parameters.
  if (state.params.slot >= cfg.t_p_slots) {
    state.params.slot = 1;
    state.params.r = 1;
    state.params.f = 0;
  } else {
    ++state.params.slot;
  }
  return out;
}

RunMetrics run_realization(const ScenarioConfig& cfg,
                           const EngineConfig& engine_cfg, Policy policy,
                           int realization, const AmcTable& table,
                           std::vector<TraceRow>* trace) {
  std::uint64_t seed = realization_seed(engine_cfg.base_seed, realization);
  // The channel stream is shared across policies when paired; otherwise it
  // is salted per policy.
  std::uint64_t channel_seed =
      engine_cfg.paired_fading
          ? hash_combine(seed, 0xc4a11ULL)
          : hash_combine(hash_combine(seed, 0xc4a11ULL),
                         static_cast<std::uint64_t>(policy));
  Rng policy_rng(hash_combine(seed, 0x9017ULL + static_cast<std::uint64_t>(policy)));

  SimState state = init_state(cfg, hash_combine(seed, 0x5ce0ULL), table);
  const long long total = engine_cfg.slots;
  const long long warmup =
      static_cast<long long>(std::floor(engine_cfg.warmup_fraction *
                                        static_cast<double>(total)));

  RunMetrics m;
  m.policy = policy;
  m.seed = seed;
  m.gamma_th_db = cfg.gamma_th_db;
  m.per_pair_avg_rate_bps.assign(state.pairs.size(), 0.0);

  double power_acc = 0.0, queue_acc = 0.0;
  double q3_acc = 0.0, q4_acc = 0.0;
  long long q3_n = 0, q4_n = 0;
  long long scheduled = 0;

  for (long long t = 0; t < total; ++t) {
    FeedbackFrame frame;
    SlotOutcome out = run_slot(state, policy, cfg, table, channel_seed,
                               policy_rng, trace ? &frame : nullptr);
    if (trace) trace->push_back({t, out, frame});
    double sum_q = 0.0;
    for (const auto& q : state.queues) sum_q += q.backlog;
    if (t >= 3 * total / 4) { q4_acc += sum_q; ++q4_n; }
    else if (t >= total / 2 && t < 3 * total / 4) { q3_acc += sum_q; ++q3_n; }
    if (t < warmup) continue;

    ++m.slots;
    power_acc += out.power_w;
    queue_acc += sum_q;
    m.total_energy_j += out.power_w * cfg.slot_duration_s;
    m.total_bits += out.rate_bps * cfg.slot_duration_s;
    m.feedback_total += out.feedback_cost;
    if (out.collision_index) ++m.collision_count;
    if (out.scheduled) {
      ++scheduled;
      m.per_pair_avg_rate_bps[static_cast<std::size_t>(*out.scheduled)] +=
          out.rate_bps;
    }
  }

  if (m.slots > 0) {
    m.avg_power_w = power_acc / static_cast<double>(m.slots);
    m.avg_sum_queue = queue_acc / static_cast<double>(m.slots);
    m.scheduled_slot_fraction =
        static_cast<double>(scheduled) / static_cast<double>(m.slots);
    for (auto& r : m.per_pair_avg_rate_bps) r /= static_cast<double>(m.slots);
  }
  if (q3_n > 0) m.sum_queue_q3_mean = q3_acc / static_cast<double>(q3_n);
  if (q4_n > 0) m.sum_queue_q4_mean = q4_acc / static_cast<double>(q4_n);
  return m;
}

ComparisonResult compare_policies(const ScenarioConfig& cfg,
                                  const EngineConfig& engine_cfg,
                                  const std::vector<Policy>& policies,
                                  const std::vector<double>& gamma_sweep_db,
                                  const AmcTable& full_table) {
  if (policies.empty())
    throw std::invalid_argument("compare_policies: need at least one policy");
  if (gamma_sweep_db.empty())
    throw std::invalid_argument("compare_policies: empty gamma sweep");

  struct Task {
    std::size_t index;
    double gamma_db;
    Policy policy;
    int realization;
  };
  std::vector<Task> tasks;
  for (double g : gamma_sweep_db)
    for (Policy p : policies)
      for (int r = 0; r < engine_cfg.realizations; ++r)
        tasks.push_back({tasks.size(), g, p, r});

  std::vector<RunMetrics> runs(tasks.size());
  const int jobs = std::max(1, engine_cfg.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& task = tasks[i];
      ScenarioConfig point_cfg = cfg;
      point_cfg.gamma_th_db = task.gamma_db;
      AmcTable point_table = single_rate_table(full_table, task.gamma_db);
      runs[task.index] = run_realization(point_cfg, engine_cfg, task.policy,
                                         task.realization, point_table);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ComparisonResult result;
  result.runs = std::move(runs);
  for (double g : gamma_sweep_db) {
    // Round-robin baseline first, for the EC reduction column.
    double rr_power = 0.0;
    for (const auto& run : result.runs)
      if (run.gamma_th_db == g && run.policy == Policy::kRoundRobin)
        rr_power += run.avg_power_w;
    int rr_count = 0;
    for (const auto& run : result.runs)
      if (run.gamma_th_db == g && run.policy == Policy::kRoundRobin) ++rr_count;
    if (rr_count > 0) rr_power /= rr_count;

    for (Policy p : policies) {
      std::vector<double> powers, ees, collisions;
      for (const auto& run : result.runs) {
        if (run.gamma_th_db != g || run.policy != p) continue;
        powers.push_back(run.avg_power_w);
        ees.push_back(run.energy_efficiency());
        collisions.push_back(
            run.slots > 0 ? static_cast<double>(run.collision_count) /
                                static_cast<double>(run.slots)
                          : 0.0);
      }
      SummaryRow row;
      row.gamma_th_db = g;
      row.policy = p;
      row.realizations = static_cast<int>(powers.size());
      row.mean_avg_power_w = mean(powers);
      row.ci95_avg_power_w = ci95_halfwidth(powers);
      row.mean_ee_bits_per_j = mean(ees);
      row.ci95_ee_bits_per_j = ci95_halfwidth(ees);
      row.mean_collision_rate = mean(collisions);
      row.ec_reduction_vs_round_robin_pct =
          (rr_count > 0 && rr_power > 0.0)
              ? 100.0 * (1.0 - row.mean_avg_power_w / rr_power)
              : 0.0;
      result.summary.push_back(row);
    }
  }
  return result;
}

std::string runs_csv(const std::vector<RunMetrics>& runs) {
  std::ostringstream out;
  out << "seed,policy,gamma_th_db,avg_power_w,ee_bits_per_j,avg_sum_queue,"
         "collision_rate,scheduled_fraction\n";
  for (const auto& r : runs) {
    double coll = r.slots > 0 ? static_cast<double>(r.collision_count) /
                                    static_cast<double>(r.slots)
                              : 0.0;
    out << r.seed << ',' << to_string(r.policy) << ','
        << fmt_double(r.gamma_th_db) << ',' << fmt_double(r.avg_power_w) << ','
        << fmt_double(r.energy_efficiency()) << ','
        << fmt_double(r.avg_sum_queue) << ',' << fmt_double(coll) << ','
        << fmt_double(r.scheduled_slot_fraction) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "gamma_th_db,policy,realizations,mean_avg_power_w,ci95_avg_power_w,"
         "mean_ee_bits_per_j,ci95_ee_bits_per_j,mean_collision_rate,"
         "ec_reduction_vs_round_robin_pct\n";
  for (const auto& r : rows) {
    out << fmt_double(r.gamma_th_db) << ',' << to_string(r.policy) << ','
        << r.realizations << ',' << fmt_double(r.mean_avg_power_w) << ','
        << fmt_double(r.ci95_avg_power_w) << ','
        << fmt_double(r.mean_ee_bits_per_j) << ','
        << fmt_double(r.ci95_ee_bits_per_j) << ','
        << fmt_double(r.mean_collision_rate) << ','
        << fmt_double(r.ec_reduction_vs_round_robin_pct) << '\n';
  }
  return out.str();
}

}  // namespace d2dsched

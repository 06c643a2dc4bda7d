// Command-line front end: scenario generation, single runs, policy
// comparisons, collision analytics. All outputs are UTF-8 CSVs with a
// header row; the effective configuration is echoed beside them.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "d2dsched/collision.hpp"
#include "d2dsched/engine.hpp"
#include "d2dsched/feedback.hpp"

namespace fs = std::filesystem;
using namespace d2dsched;

namespace {

constexpr int kExitRegime = 1;
constexpr int kExitConfig = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string amc_csv;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "scenario config file (key = value lines)");
  cmd->add_option("--out", opts.out_dir, "output directory (created if absent)");
  cmd->add_option("--amc-csv", opts.amc_csv,
                  "AMC table override, CSV with header snr_db,rate_bps");
  cmd->add_option("--set", opts.overrides,
                  "config override KEY=VALUE (repeatable, wins over --config)");
  cmd->add_option("--seed", opts.seed,
                  "base seed (fallback: env D2D_SCHED_SEED, then config)");
  cmd->add_option("--jobs", opts.jobs,
                  "worker threads; results are independent of this")
      ->check(CLI::PositiveNumber);
}

ScenarioConfig build_config(const CommonOpts& opts) {
  ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = load_scenario_config(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override '" + kv + "': expected KEY=VALUE");
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.seed) {
    cfg.seed = *opts.seed;
  } else if (const char* env = std::getenv("D2D_SCHED_SEED")) {
    apply_override(cfg, "seed", env);
  }
  cfg.validate();
  return cfg;
}

AmcTable build_table(const CommonOpts& opts, const ScenarioConfig& cfg) {
  (void)cfg;
  if (!opts.amc_csv.empty()) return load_amc_csv(opts.amc_csv);
  return default_amc_table();
}

fs::path prepare_out(const CommonOpts& opts, const ScenarioConfig& cfg) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  std::ofstream echo(dir / "effective_config.txt");
  echo << dump_config(cfg);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<double> parse_sweep(const std::string& spec) {
  // A:B:STEP inclusive of B up to rounding.
  double a = 0.0, b = 0.0, step = 1.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(step > 0.0) || b < a)
    throw std::invalid_argument("gamma sweep '" + spec +
                                "': expected A:B:STEP with STEP > 0, B >= A");
  std::vector<double> points;
  for (double g = a; g <= b + 1e-9; g += step) points.push_back(g);
  return points;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "slot,policy,scheduled,power_w,rate_bps,collision_index,"
         "feedback_cost\n";
  for (const auto& row : trace) {
    out << row.slot << ',' << to_string(row.outcome.policy) << ',';
    if (row.outcome.scheduled) out << *row.outcome.scheduled;
    out << ',' << fmt(row.outcome.power_w) << ',' << fmt(row.outcome.rate_bps)
        << ',';
    if (row.outcome.collision_index) out << *row.outcome.collision_index;
    out << ',' << row.outcome.feedback_cost << '\n';
  }
  return out.str();
}

std::string frame_trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "slot,re_index,pair_ids\n";
  for (const auto& row : trace)
    for (const auto& [re, ids] : row.frame.occupancy) {
      out << row.slot << ',' << re << ',';
      for (std::size_t i = 0; i < ids.size(); ++i)
        out << (i ? ";" : "") << ids[i];
      out << '\n';
    }
  return out.str();
}

int cmd_gen_scenario(const CommonOpts& opts) {
  ScenarioConfig cfg = build_config(opts);
  fs::path dir = prepare_out(opts, cfg);
  Rng rng(cfg.seed);
  std::ostringstream out;
  out << "id,distance_m,path_loss_db\n";
  for (const D2DPair& p : drop_pairs(cfg, rng))
    out << p.id << ',' << fmt(p.distance_m) << ','
        << fmt(10.0 * std::log10(p.path_loss_linear)) << '\n';
  write_file(dir / "pairs.csv", out.str());
  std::cout << "wrote " << (dir / "pairs.csv").string() << "\n";
  return 0;
}

int cmd_run(const CommonOpts& opts, const std::string& policy_name,
            long long slots, int realizations, bool trace) {
  ScenarioConfig cfg = build_config(opts);
  AmcTable table = build_table(opts, cfg);
  fs::path dir = prepare_out(opts, cfg);
  Policy policy = policy_from_string(policy_name);

  EngineConfig engine;
  engine.slots = slots;
  engine.realizations = realizations;
  engine.base_seed = cfg.seed;
  engine.jobs = opts.jobs;

  AmcTable point = single_rate_table(table, cfg.gamma_th_db);
  std::vector<RunMetrics> runs;
  for (int r = 0; r < realizations; ++r) {
    std::vector<TraceRow> rows;
    runs.push_back(run_realization(cfg, engine, policy, r, point,
                                   trace && r == 0 ? &rows : nullptr));
    if (trace && r == 0) {
      write_file(dir / "trace.csv", trace_csv(rows));
      if (policy == Policy::kDistributed)
        write_file(dir / "frame_trace.csv", frame_trace_csv(rows));
    }
  }
  write_file(dir / "runs.csv", runs_csv(runs));
  std::cout << "wrote " << (dir / "runs.csv").string() << "\n";
  return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& sweep_spec,
                long long slots, int realizations) {
  ScenarioConfig cfg = build_config(opts);
  AmcTable table = build_table(opts, cfg);
  fs::path dir = prepare_out(opts, cfg);

  EngineConfig engine;
  engine.slots = slots;
  engine.realizations = realizations;
  engine.base_seed = cfg.seed;
  engine.jobs = opts.jobs;

  std::vector<Policy> policies = {Policy::kIdeal, Policy::kCentralized,
                                  Policy::kDistributed, Policy::kRoundRobin};
  ComparisonResult result =
      compare_policies(cfg, engine, policies, parse_sweep(sweep_spec), table);
  write_file(dir / "runs.csv", runs_csv(result.runs));
  write_file(dir / "summary.csv", summary_csv(result.summary));
  std::cout << "wrote " << (dir / "summary.csv").string() << "\n";
  return 0;
}

int cmd_collision(const CommonOpts& opts, long long draws) {
  ScenarioConfig cfg = build_config(opts);
  AmcTable table = build_table(opts, cfg);
  fs::path dir = prepare_out(opts, cfg);
  FeedbackCapacity cap = capacities(cfg);

  // Single-rate model at gamma_th, worst-case backlogs Q = T_p*R_th, level
  // grid from the fresh-period mapping bounds (r=1, f=0, t=T_p).
  AmcTable point = single_rate_table(table, cfg.gamma_th_db);
  const AmcEntry& entry = point.entries().front();
  Rng rng(cfg.seed);
  std::vector<D2DPair> pairs = drop_pairs(cfg, rng);

  CollisionModelInput input;
  input.n_pairs = cfg.n_pairs;
  input.k2 = cap.k2;
  input.v_weight = cfg.v_weight;
  input.snr_threshold_linear = entry.snr_threshold_linear;
  input.rate_bps = entry.rate_bps;
  input.noise_w = cfg.noise_power_w();
  for (const D2DPair& p : pairs) {
    input.path_losses.push_back(p.path_loss_linear);
    input.queue_backlogs.push_back(cfg.t_p_slots * cfg.r_th_bps);
  }
  LyapunovParams params{cfg.v_weight, 1, 0, cfg.t_p_slots};
  auto [v_min, v_max] = metric_bounds(params, cfg, point, cap.k2);
  input.levels = build_map(v_min, v_max, cap.k2).levels;
  input.validate();

  double closed_form =
      input.n_pairs <= 20 ? collision_probability(input)
                          : std::numeric_limits<double>::quiet_NaN();
  Rng mc_rng(hash_combine(cfg.seed, 0xc0111ULL));
  auto [estimate, stderr_] = mc_collision_oracle(input, draws, mc_rng);
  double l_min = path_loss(cfg.d_min_m, cfg.path_loss);
  double v_eps = v_for_epsilon(
      cfg.epsilon_collision, cfg.r_th_bps, entry.rate_bps, cfg.t_p_slots,
      cfg.p_max_w, entry.snr_threshold_linear, cfg.noise_power_w(), l_min,
      cfg.n_pairs, cap.k2);

  std::ostringstream out;
  out << "p_c_closed_form,p_c_mc_estimate,mc_stderr,v_for_epsilon\n"
      << fmt(closed_form) << ',' << fmt(estimate) << ',' << fmt(stderr_)
      << ',' << fmt(v_eps) << '\n';
  write_file(dir / "collision.csv", out.str());
  std::cout << out.str();
  return 0;
}

int cmd_tune_v(const CommonOpts& opts, double epsilon) {
  ScenarioConfig cfg = build_config(opts);
  AmcTable table = build_table(opts, cfg);
  fs::path dir = prepare_out(opts, cfg);
  FeedbackCapacity cap = capacities(cfg);
  AmcTable point = single_rate_table(table, cfg.gamma_th_db);
  const AmcEntry& entry = point.entries().front();

  // Reference-regime unit mix: rates in kbps, per-RB power cap and noise,
  // the SNR upper limit S = 80 dB, and the loss at the closest distance.
  double l_min = path_loss(cfg.d_min_m, cfg.path_loss);
  double s_cap = std::pow(10.0, 80.0 / 10.0);
  double v = v_for_epsilon(epsilon, cfg.r_th_bps / 1e3, entry.rate_bps / 1e3,
                           cfg.t_p_slots, cfg.p_max_w / cfg.bandwidth_rb,
                           s_cap, cfg.noise_power_w(), l_min, cfg.n_pairs,
                           cap.k2);
  std::ostringstream out;
  out << "epsilon,v_weight\n" << fmt(epsilon) << ',' << fmt(v) << '\n';
  write_file(dir / "tune_v.csv", out.str());
  std::cout << "V = " << fmt(v) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Time-slotted simulator for energy-aware D2D scheduling under limited "
      "CSI feedback.\n"
      "Config keys (SI units): cell_radius_m, n_pairs, d_min_m, d_max_m,\n"
      "bandwidth_rb, n_rb_feedback, delta_shift, n_oc, k1_override,\n"
      "k2_override, p_max_w, noise_density_dbm_hz [dBm/Hz], noise_figure_db\n"
      "[dB], alloc_bandwidth_hz, r_th_bps, gamma_th_db [dB], t_p_slots,\n"
      "epsilon_collision, v_weight, slot_duration_s, quantized_powers_w\n"
      "[W,comma list], mc_subset_samples, path_loss_model\n"
      "{dual-slope,power-law}, path_loss_exponent, path_loss_ref_db [dB],\n"
      "seed."};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string policy = "distributed";
  std::string sweep = "0:14:1";
  long long slots = 20000, draws = 1000000;
  int realizations = 10;
  bool trace = false;
  double epsilon = 0.1;

  CLI::App* gen = app.add_subcommand("gen-scenario",
                                     "drop pairs, write pairs.csv");
  add_common(gen, opts);

  CLI::App* run = app.add_subcommand("run", "single-policy run -> runs.csv");
  add_common(run, opts);
  run->add_option("--policy", policy,
                  "ideal | centralized | distributed | round-robin");
  run->add_option("--slots", slots, "slots per realization");
  run->add_option("--realizations", realizations, "independent pair drops");
  run->add_flag("--trace", trace, "write per-slot trace.csv (realization 0)");

  CLI::App* cmp = app.add_subcommand(
      "compare", "sweep gamma_th over all policies -> summary.csv");
  add_common(cmp, opts);
  cmp->add_option("--gamma-sweep", sweep, "A:B:STEP in dB");
  cmp->add_option("--slots", slots, "slots per realization");
  cmp->add_option("--realizations", realizations, "independent pair drops");

  CLI::App* col = app.add_subcommand(
      "collision", "closed-form vs Monte-Carlo collision probability");
  add_common(col, opts);
  col->add_option("--draws", draws, "Monte-Carlo draws");

  CLI::App* tune = app.add_subcommand(
      "tune-v", "Lyapunov weight meeting a collision-probability target");
  add_common(tune, opts);
  tune->add_option("--epsilon", epsilon, "target collision probability");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_scenario(opts);
    if (run->parsed()) return cmd_run(opts, policy, slots, realizations, trace);
    if (cmp->parsed()) return cmd_compare(opts, sweep, slots, realizations);
    if (col->parsed()) return cmd_collision(opts, draws);
    if (tune->parsed()) return cmd_tune_v(opts, epsilon);
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#ifndef D2DSCHED_SCENARIO_HPP
#define D2DSCHED_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2dsched/rng.hpp"

namespace d2dsched {

enum class PathLossModel {
  kDualSlope,  // max(free-space-like, WINNER-like dual slope), 2 GHz, 1.5 m antennas
  kPowerLaw,   // L = ref * d^beta
};

PathLossModel path_loss_model_from_string(const std::string& name);
std::string to_string(PathLossModel model);

struct PathLossParams {
  PathLossModel model = PathLossModel::kDualSlope;
  double power_law_exponent = 3.67;
  double power_law_ref_db = 38.46;  // loss at 1 m, free space at 2 GHz
};

// One AMC operating point: SNR at or above the threshold supports the rate.
struct AmcEntry {
  double snr_threshold_linear = 0.0;
  double rate_bps = 0.0;
};

class AmcTable {
 public:
  explicit AmcTable(std::vector<AmcEntry> entries);

  const std::vector<AmcEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const AmcEntry& entry(std::size_t m) const { return entries_[m]; }
  double min_rate_bps() const { return entries_.front().rate_bps; }
  double max_rate_bps() const { return entries_.back().rate_bps; }

 private:
  std::vector<AmcEntry> entries_;  // thresholds and rates strictly increasing
};

// All static configuration: cell geometry, feedback capacities, link budget,
// scheduling constants. Values mirror the scenario config file keys.
struct ScenarioConfig {
  double cell_radius_m = 500.0;
  int n_pairs = 50;
  double d_min_m = 3.0;
  double d_max_m = 350.0;
  int bandwidth_rb = 50;
  int n_rb_feedback = 2;
  int delta_shift = 1;
  int n_oc = 3;
  int k1_override = 0;  // 0 = derive K1 from the PUCCH formula
  int k2_override = 0;  // 0 = derive K2 from the PUCCH formula
  double p_max_w = 0.25;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 9.0;
  double alloc_bandwidth_hz = 200e3;  // bandwidth of one scheduled allocation
  double r_th_bps = 500e3;
  double gamma_th_db = 14.0;
  int t_p_slots = 1000000;
  double epsilon_collision = 0.1;
  double v_weight = 1e13;
  double slot_duration_s = 1e-3;
  std::vector<double> quantized_powers_w = {0.05, 0.10, 0.15, 0.20};
  int mc_subset_samples = 500;
  PathLossParams path_loss;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument naming the bad key

  // Composed noise power over one scheduled allocation:
  // density + 10*log10(alloc bandwidth) + noise figure.
  double noise_power_w() const;
};

struct D2DPair {
  int id = 0;
  double tx_x_m = 0.0;  // transmitter position in the cell
  double tx_y_m = 0.0;
  double distance_m = 0.0;
  double path_loss_linear = 1.0;  // loss >= 1; received power = P*|h|^2/L
};

// Transmitter positions uniform in the disc, pair distance uniform in
// [d_min, d_max], deterministic given cfg.seed ^ rng state.
std::vector<D2DPair> drop_pairs(const ScenarioConfig& cfg, Rng& rng);

// Linear path loss (>= 1) at the given distance.
double path_loss(double distance_m, const PathLossParams& params);

// M=15 table, thresholds {0,...,14} dB, rates from a truncated-Shannon
// curve scaled so the 14 dB entry is 700 kbps/RB times the allocation size.
AmcTable default_amc_table(int bandwidth_rb = 1);

// Restriction to the single operating point at gamma_th (single-rate mode).
AmcTable single_rate_table(const AmcTable& table, double gamma_th_db);

// Largest m (0-based) with S_m <= snr; nullopt below the first threshold.
std::optional<std::size_t> snr_to_rate_index(double snr_linear,
                                             const AmcTable& table);

// Flat key=value scenario file; unknown keys are rejected.
ScenarioConfig load_scenario_config(const std::string& path);
void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);
std::string dump_config(const ScenarioConfig& cfg);

// CSV with header snr_db,rate_bps.
AmcTable load_amc_csv(const std::string& path);

}  // namespace d2dsched

#endif  // D2DSCHED_SCENARIO_HPP

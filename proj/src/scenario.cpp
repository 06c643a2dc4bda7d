#include "d2dsched/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace d2dsched {

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    bad_key(key, "not a number: '" + value + "'");
  }
  if (pos != value.size()) bad_key(key, "trailing characters in '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  double v = parse_double(key, value);
  if (v != std::floor(v)) bad_key(key, "expected an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

}  // namespace

PathLossModel path_loss_model_from_string(const std::string& name) {
  if (name == "dual-slope") return PathLossModel::kDualSlope;
  if (name == "power-law") return PathLossModel::kPowerLaw;
  throw std::invalid_argument("unknown path-loss model '" + name + "'");
}

std::string to_string(PathLossModel model) {
  switch (model) {
    case PathLossModel::kDualSlope: return "dual-slope";
    case PathLossModel::kPowerLaw: return "power-law";
  }
  return "?";
}

AmcTable::AmcTable(std::vector<AmcEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("AMC table is empty");
  for (std::size_t m = 1; m < entries_.size(); ++m) {
    if (entries_[m].snr_threshold_linear <= entries_[m - 1].snr_threshold_linear)
      throw std::invalid_argument("AMC thresholds must be strictly increasing");
    if (entries_[m].rate_bps <= entries_[m - 1].rate_bps)
      throw std::invalid_argument("AMC rates must be strictly increasing");
  }
}

void ScenarioConfig::validate() const {
  if (n_pairs < 1) bad_key("n_pairs", "must be >= 1");
  if (!(d_min_m > 0.0)) bad_key("d_min_m", "must be > 0");
  if (!(d_min_m < d_max_m)) bad_key("d_max_m", "must exceed d_min_m");
  if (!(d_max_m <= 2.0 * cell_radius_m))
    bad_key("d_max_m", "must be <= 2*cell_radius_m");
  if (bandwidth_rb < 1) bad_key("bandwidth_rb", "must be >= 1");
  if (n_rb_feedback < 1) bad_key("n_rb_feedback", "must be >= 1");
  if (delta_shift < 1) bad_key("delta_shift", "must be >= 1");
  if (n_oc < 1) bad_key("n_oc", "must be >= 1");
  if (k1_override < 0) bad_key("k1_override", "must be >= 0 (0 = formula)");
  if (k2_override < 0 || k2_override == 1)
    bad_key("k2_override", "must be 0 (formula) or >= 2");
  if (!(p_max_w > 0.0)) bad_key("p_max_w", "must be > 0");
  if (!(alloc_bandwidth_hz > 0.0)) bad_key("alloc_bandwidth_hz", "must be > 0");
  if (!(r_th_bps > 0.0)) bad_key("r_th_bps", "must be > 0");
  if (t_p_slots < 1) bad_key("t_p_slots", "must be >= 1");
  if (!(epsilon_collision > 0.0 && epsilon_collision < 1.0))
    bad_key("epsilon_collision", "must be in (0,1)");
  if (!(v_weight > 0.0)) bad_key("v_weight", "must be > 0");
  if (!(slot_duration_s > 0.0)) bad_key("slot_duration_s", "must be > 0");
  if (quantized_powers_w.empty())
    bad_key("quantized_powers_w", "must not be empty");
  for (std::size_t i = 0; i < quantized_powers_w.size(); ++i) {
    if (quantized_powers_w[i] > p_max_w)
      bad_key("quantized_powers_w", "entries must be <= p_max_w");
    if (i > 0 && quantized_powers_w[i] <= quantized_powers_w[i - 1])
      bad_key("quantized_powers_w", "entries must be strictly increasing");
  }
  if (mc_subset_samples < 1) bad_key("mc_subset_samples", "must be >= 1");
}

double ScenarioConfig::noise_power_w() const {
  double dbm = noise_density_dbm_hz + 10.0 * std::log10(alloc_bandwidth_hz) +
               noise_figure_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

std::vector<D2DPair> drop_pairs(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<D2DPair> pairs;
  pairs.reserve(static_cast<std::size_t>(cfg.n_pairs));
  for (int n = 0; n < cfg.n_pairs; ++n) {
    // Transmitter uniform in the disc via the sqrt transform; the pair
    // distance is drawn independently of the position.
    double radius = cfg.cell_radius_m * std::sqrt(rng.uniform());
    double angle = 2.0 * std::numbers::pi * rng.uniform();
    double d = rng.uniform(cfg.d_min_m, cfg.d_max_m);
    pairs.push_back({n, radius * std::cos(angle), radius * std::sin(angle), d,
                     path_loss(d, cfg.path_loss)});
  }
  return pairs;
}

double path_loss(double distance_m, const PathLossParams& params) {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("path_loss: distance must be > 0");
  switch (params.model) {
    case PathLossModel::kPowerLaw: {
      double ref = std::pow(10.0, params.power_law_ref_db / 10.0);
      return ref * std::pow(distance_m, params.power_law_exponent);
    }
    case PathLossModel::kDualSlope: {
      // 2 GHz carrier, 1.5 m antennas (0.8 m effective height). Loss is the
      // max of a free-space-like slope and a WINNER-like dual slope.
      constexpr double f_ghz = 2.0;
      constexpr double h_eff = 0.8;
      double d = distance_m;
      double free_db = 20.0 * std::log10(d) + 46.4 + 20.0 * std::log10(f_ghz / 5.0);
      double d_bp = 4.0 * h_eff * h_eff * (f_ghz * 1e9) / 3.0e8;
      double d2d_db;
      if (d < d_bp) {
        d2d_db = 22.7 * std::log10(d) + 27.0 + 20.0 * std::log10(f_ghz);
      } else {
        d2d_db = 40.0 * std::log10(d) + 7.56 - 17.3 * std::log10(h_eff) -
                 17.3 * std::log10(h_eff) + 2.7 * std::log10(f_ghz);
      }
      return std::pow(10.0, std::max(free_db, d2d_db) / 10.0);
    }
  }
  throw std::invalid_argument("path_loss: unknown model");
}

AmcTable default_amc_table(int bandwidth_rb) {
  // 15 CQI-like points, thresholds 0..14 dB. Rates follow log2(1+S)
  // anchored so the top entry is 700 kbps per RB.
  constexpr int kLevels = 15;
  constexpr double kTopRateBpsPerRb = 700e3;
  double top_snr = std::pow(10.0, 14.0 / 10.0);
  double scale = kTopRateBpsPerRb * bandwidth_rb / std::log2(1.0 + top_snr);
  std::vector<AmcEntry> entries;
  entries.reserve(kLevels);
  for (int m = 0; m < kLevels; ++m) {
    double snr = std::pow(10.0, m / 10.0);
    entries.push_back({snr, scale * std::log2(1.0 + snr)});
  }
  return AmcTable(std::move(entries));
}

AmcTable single_rate_table(const AmcTable& table, double gamma_th_db) {
  double target = std::pow(10.0, gamma_th_db / 10.0);
  // Nearest threshold at or below gamma_th; clamp to the first entry.
  const AmcEntry* chosen = &table.entries().front();
  for (const auto& e : table.entries()) {
    if (e.snr_threshold_linear <= target * (1.0 + 1e-12)) chosen = &e;
  }
  return AmcTable({*chosen});
}

std::optional<std::size_t> snr_to_rate_index(double snr_linear,
                                             const AmcTable& table) {
  if (snr_linear < table.entries().front().snr_threshold_linear)
    return std::nullopt;
  std::size_t m = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.entry(i).snr_threshold_linear <= snr_linear) m = i;
  }
  return m;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "cell_radius_m") cfg.cell_radius_m = parse_double(key, value);
  else if (key == "n_pairs") cfg.n_pairs = parse_int(key, value);
  else if (key == "d_min_m") cfg.d_min_m = parse_double(key, value);
  else if (key == "d_max_m") cfg.d_max_m = parse_double(key, value);
  else if (key == "bandwidth_rb") cfg.bandwidth_rb = parse_int(key, value);
  else if (key == "n_rb_feedback") cfg.n_rb_feedback = parse_int(key, value);
  else if (key == "delta_shift") cfg.delta_shift = parse_int(key, value);
  else if (key == "n_oc") cfg.n_oc = parse_int(key, value);
  else if (key == "k1_override") cfg.k1_override = parse_int(key, value);
  else if (key == "k2_override") cfg.k2_override = parse_int(key, value);
  else if (key == "p_max_w") cfg.p_max_w = parse_double(key, value);
  else if (key == "noise_density_dbm_hz") cfg.noise_density_dbm_hz = parse_double(key, value);
  else if (key == "noise_figure_db") cfg.noise_figure_db = parse_double(key, value);
  else if (key == "alloc_bandwidth_hz") cfg.alloc_bandwidth_hz = parse_double(key, value);
  else if (key == "r_th_bps") cfg.r_th_bps = parse_double(key, value);
  else if (key == "gamma_th_db") cfg.gamma_th_db = parse_double(key, value);
  else if (key == "t_p_slots") cfg.t_p_slots = parse_int(key, value);
  else if (key == "epsilon_collision") cfg.epsilon_collision = parse_double(key, value);
  else if (key == "v_weight") cfg.v_weight = parse_double(key, value);
  else if (key == "slot_duration_s") cfg.slot_duration_s = parse_double(key, value);
  else if (key == "quantized_powers_w") cfg.quantized_powers_w = parse_list(key, value);
  else if (key == "mc_subset_samples") cfg.mc_subset_samples = parse_int(key, value);
  else if (key == "path_loss_model") cfg.path_loss.model = path_loss_model_from_string(value);
  else if (key == "path_loss_exponent") cfg.path_loss.power_law_exponent = parse_double(key, value);
  else if (key == "path_loss_ref_db") cfg.path_loss.power_law_ref_db = parse_double(key, value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(key, value));
  else bad_key(key, "unknown key");
}

std::string dump_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "cell_radius_m = " << cfg.cell_radius_m << "\n"
      << "n_pairs = " << cfg.n_pairs << "\n"
      << "d_min_m = " << cfg.d_min_m << "\n"
      << "d_max_m = " << cfg.d_max_m << "\n"
      << "bandwidth_rb = " << cfg.bandwidth_rb << "\n"
      << "n_rb_feedback = " << cfg.n_rb_feedback << "\n"
      << "delta_shift = " << cfg.delta_shift << "\n"
      << "n_oc = " << cfg.n_oc << "\n"
      << "k1_override = " << cfg.k1_override << "\n"
      << "k2_override = " << cfg.k2_override << "\n"
      << "p_max_w = " << cfg.p_max_w << "\n"
      << "noise_density_dbm_hz = " << cfg.noise_density_dbm_hz << "\n"
      << "noise_figure_db = " << cfg.noise_figure_db << "\n"
      << "alloc_bandwidth_hz = " << cfg.alloc_bandwidth_hz << "\n"
      << "r_th_bps = " << cfg.r_th_bps << "\n"
      << "gamma_th_db = " << cfg.gamma_th_db << "\n"
      << "t_p_slots = " << cfg.t_p_slots << "\n"
      << "epsilon_collision = " << cfg.epsilon_collision << "\n"
      << "v_weight = " << cfg.v_weight << "\n"
      << "slot_duration_s = " << cfg.slot_duration_s << "\n"
      << "quantized_powers_w = ";
  for (std::size_t i = 0; i < cfg.quantized_powers_w.size(); ++i)
    out << (i ? "," : "") << cfg.quantized_powers_w[i];
  out << "\n"
      << "mc_subset_samples = " << cfg.mc_subset_samples << "\n"
      << "path_loss_model = " << to_string(cfg.path_loss.model) << "\n"
      << "path_loss_exponent = " << cfg.path_loss.power_law_exponent << "\n"
      << "path_loss_ref_db = " << cfg.path_loss.power_law_ref_db << "\n"
      << "seed = " << cfg.seed << "\n";
  return out.str();
}

AmcTable load_amc_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open AMC csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("snr_db,rate_bps", 0) != 0)
    throw std::invalid_argument(path + ": expected header snr_db,rate_bps");
  std::vector<AmcEntry> entries;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument(path + ": malformed row '" + line + "'");
    double snr_db = parse_double("snr_db", line.substr(0, comma));
    double rate = parse_double("rate_bps", line.substr(comma + 1));
    entries.push_back({std::pow(10.0, snr_db / 10.0), rate});
  }
  return AmcTable(std::move(entries));
}

}  // namespace d2dsched

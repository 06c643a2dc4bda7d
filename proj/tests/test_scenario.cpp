#include <cmath>
#include <fstream>

#include "d2dsched/scenario.hpp"
#include "doctest.h"

using namespace d2dsched;

namespace {

ScenarioConfig table_one() {
  ScenarioConfig cfg;  // defaults mirror the reference numerical settings
  return cfg;
}

}  // namespace

TEST_CASE("drop_pairs produces the requested count within distance bounds") {
  ScenarioConfig cfg = table_one();
  Rng rng(42);
  auto pairs = drop_pairs(cfg, rng);
  REQUIRE(pairs.size() == 50);
  for (const auto& p : pairs) {
    CHECK(p.distance_m >= 3.0);
    CHECK(p.distance_m <= 350.0);
    CHECK(p.path_loss_linear >= 1.0);
  }
}

TEST_CASE("drop_pairs single pair degenerate count") {
  ScenarioConfig cfg = table_one();
  cfg.n_pairs = 1;
  Rng rng(7);
  auto pairs = drop_pairs(cfg, rng);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].distance_m >= cfg.d_min_m);
  CHECK(pairs[0].distance_m <= cfg.d_max_m);
}

TEST_CASE("drop_pairs is bit-identical for equal seeds") {
  ScenarioConfig cfg = table_one();
  Rng a(123), b(123);
  auto pa = drop_pairs(cfg, a);
  auto pb = drop_pairs(cfg, b);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].distance_m == pb[i].distance_m);
    CHECK(pa[i].path_loss_linear == pb[i].path_loss_linear);
    CHECK(pa[i].tx_x_m == pb[i].tx_x_m);
  }
}

TEST_CASE("path_loss power law matches hand evaluation on a grid") {
  PathLossParams params;
  params.model = PathLossModel::kPowerLaw;
  params.power_law_exponent = 3.67;
  params.power_law_ref_db = 38.46;
  // 10^3.846 * d^3.67, evaluated independently
  CHECK(path_loss(3.0, params) == doctest::Approx(3.9539848853e5).epsilon(1e-9));
  CHECK(path_loss(10.0, params) == doctest::Approx(3.2809529311e7).epsilon(1e-9));
  CHECK(path_loss(100.0, params) == doctest::Approx(1.5346169828e11).epsilon(1e-9));
}

TEST_CASE("path_loss power law scaling: d*10 multiplies loss by 10^beta") {
  PathLossParams params;
  params.model = PathLossModel::kPowerLaw;
  double ratio = path_loss(20.0, params) / path_loss(2.0, params);
  CHECK(ratio == doctest::Approx(std::pow(10.0, 3.67)).epsilon(1e-12));
}

TEST_CASE("path_loss is monotone over both models") {
  for (auto model : {PathLossModel::kDualSlope, PathLossModel::kPowerLaw}) {
    PathLossParams params;
    params.model = model;
    double prev = 0.0;
    for (double d = 3.0; d <= 350.0; d += 5.0) {
      double l = path_loss(d, params);
      CHECK(l >= prev);
      CHECK(std::isfinite(l));
      prev = l;
    }
  }
}

TEST_CASE("dual slope loss at the minimum distance matches the link budget") {
  PathLossParams params;  // dual-slope default
  CHECK(10.0 * std::log10(path_loss(3.0, params)) ==
        doctest::Approx(47.983624920952494).epsilon(1e-12));
}

TEST_CASE("default AMC table shape and anchors") {
  AmcTable table = default_amc_table();
  REQUIRE(table.size() == 15);
  for (std::size_t m = 0; m < 15; ++m)
    CHECK(table.entry(m).snr_threshold_linear ==
          doctest::Approx(std::pow(10.0, m / 10.0)).epsilon(1e-12));
  CHECK(table.entry(14).rate_bps == doctest::Approx(700e3).epsilon(1e-12));
  for (std::size_t m = 1; m < 15; ++m)
    CHECK(table.entry(m).rate_bps > table.entry(m - 1).rate_bps);
}

TEST_CASE("snr_to_rate_index boundary, saturation and monotonicity") {
  AmcTable table = default_amc_table();
  CHECK(snr_to_rate_index(table.entry(2).snr_threshold_linear, table) == 2);
  CHECK(!snr_to_rate_index(0.5, table));  // below S_1 = 1.0
  CHECK(snr_to_rate_index(1e9, table) == 14);
  std::optional<std::size_t> prev;
  for (double snr = 0.0; snr < 40.0; snr += 0.37) {
    auto m = snr_to_rate_index(snr, table);
    if (prev && m) CHECK(*m >= *prev);
    if (m) prev = m;
  }
}

TEST_CASE("config round trip through file and overrides") {
  ScenarioConfig cfg = table_one();
  std::string path = "test_cfg.tmp";
  {
    std::ofstream out(path);
    out << dump_config(cfg);
  }
  ScenarioConfig loaded = load_scenario_config(path);
  CHECK(loaded.n_pairs == cfg.n_pairs);
  CHECK(loaded.p_max_w == cfg.p_max_w);
  CHECK(loaded.quantized_powers_w == cfg.quantized_powers_w);

  apply_override(loaded, "n_pairs", "10");
  CHECK(loaded.n_pairs == 10);
  CHECK_THROWS_AS(apply_override(loaded, "no_such_key", "1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_override(loaded, "n_pairs", "ten"),
                  std::invalid_argument);
}

TEST_CASE("config invariants rejected with the offending key named") {
  ScenarioConfig cfg = table_one();
  cfg.d_max_m = 2.0;  // below d_min
  try {
    cfg.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("d_max_m") != std::string::npos);
  }
}

TEST_CASE("amc csv override") {
  std::string path = "test_amc.tmp";
  {
    std::ofstream out(path);
    out << "snr_db,rate_bps\n0,100000\n5,200000\n10,400000\n";
  }
  AmcTable table = load_amc_csv(path);
  REQUIRE(table.size() == 3);
  CHECK(table.entry(1).snr_threshold_linear ==
        doctest::Approx(std::pow(10.0, 0.5)));
  CHECK(table.entry(2).rate_bps == 400000.0);
}

TEST_CASE("single_rate_table picks the operating point at gamma") {
  AmcTable table = default_amc_table();
  AmcTable point = single_rate_table(table, 10.0);
  REQUIRE(point.size() == 1);
  CHECK(point.entry(0).snr_threshold_linear ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK(point.entry(0).rate_bps ==
        doctest::Approx(table.entry(10).rate_bps).epsilon(1e-12));
}

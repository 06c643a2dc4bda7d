#include <cmath>

#include "d2dsched/channel.hpp"
#include "doctest.h"

using namespace d2dsched;

TEST_CASE("fading is unit-mean exponential") {
  Rng rng(2024);
  const int n = 1000000;
  double sum = 0.0;
  int above1 = 0, above2 = 0, above3 = 0;
  for (int i = 0; i < n; ++i) {
    double h2 = sample_fading(rng).h_squared;
    sum += h2;
    above1 += h2 > 1.0;
    above2 += h2 > 2.0;
    above3 += h2 > 3.0;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  // exponential tails within 3 sigma of the binomial sampling error
  for (auto [count, x] : {std::pair{above1, 1.0}, {above2, 2.0}, {above3, 3.0}}) {
    double p = std::exp(-x);
    double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(count) / n - p) < 3.0 * sigma);
  }
}

TEST_CASE("fading streams are deterministic per seed") {
  Rng a(5), b(5), c(6);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    double xa = sample_fading(a).h_squared;
    double xb = sample_fading(b).h_squared;
    double xc = sample_fading(c).h_squared;
    all_equal = all_equal && xa == xb;
    any_diff = any_diff || xa != xc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

namespace {

ScenarioConfig test_cfg() {
  ScenarioConfig cfg;
  cfg.n_pairs = 1;
  return cfg;
}

}  // namespace

TEST_CASE("required_power hand-computed oracle values") {
  ScenarioConfig cfg = test_cfg();
  AmcTable table({{100.0, 1e5}});  // single 20 dB point
  D2DPair pair{0, 0, 0, 10.0, 1e6};
  // P = S*N0*L/h2 with N0 = 6.324555320336759e-15 (per-RB table settings)
  PowerRatePoint p = required_power(pair, {2.0}, 0, cfg, table);
  CHECK(p.power_w == doctest::Approx(3.162277660168379e-7).epsilon(1e-12));
  CHECK(p.feasible);
  CHECK(p.rate_bps == 1e5);
}

TEST_CASE("required_power caps at p_max and marks infeasible") {
  ScenarioConfig cfg = test_cfg();
  AmcTable table({{1e8, 7e5}});  // 80 dB threshold
  D2DPair pair{0, 0, 0, 10.0, 1e8};
  PowerRatePoint p = required_power(pair, {1.0}, 0, cfg, table);
  // uncapped value is 63.2 W, far above the 0.25 W cap
  CHECK(p.power_w == cfg.p_max_w);
  CHECK(!p.feasible);
}

TEST_CASE("required_power limit cases") {
  ScenarioConfig cfg = test_cfg();
  AmcTable table = default_amc_table();
  D2DPair pair{0, 0, 0, 10.0, 1e5};
  PowerRatePoint strong = required_power(pair, {1e9}, 7, cfg, table);
  CHECK(strong.feasible);
  CHECK(strong.power_w < 1e-9);
  // power nonincreasing in h2, nondecreasing in m
  double prev = 1e300;
  for (double h2 : {0.1, 1.0, 10.0, 100.0}) {
    double w = required_power(pair, {h2}, 5, cfg, table).power_w;
    CHECK(w <= prev);
    prev = w;
  }
}

TEST_CASE("achievable_set has one point per rate and prefix feasibility") {
  ScenarioConfig cfg = test_cfg();
  AmcTable table = default_amc_table();
  D2DPair pair{0, 0, 0, 10.0, 3e7};
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    auto points = achievable_set(pair, sample_fading(rng), cfg, table);
    REQUIRE(points.size() == 15);
    bool seen_infeasible = false;
    double prev_power = 0.0;
    for (const auto& p : points) {
      if (!p.feasible) seen_infeasible = true;
      if (seen_infeasible) CHECK(!p.feasible);
      if (p.feasible) {
        CHECK(p.power_w >= prev_power);
        prev_power = p.power_w;
      }
      CHECK(p.power_w <= cfg.p_max_w);
    }
  }
}

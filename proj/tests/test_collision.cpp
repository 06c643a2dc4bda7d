#include <cmath>
#include <vector>

#include "d2dsched/collision.hpp"
#include "doctest.h"

using namespace d2dsched;

namespace {

// V*S*N_o*L_i = 6, Q_i*R = 2 for every pair: utility CDF exp(-6/(a+2)).
CollisionModelInput symmetric_input(int n, std::vector<double> levels) {
  CollisionModelInput in;
  in.n_pairs = n;
  in.k2 = static_cast<int>(levels.size());
  in.v_weight = 2.0;
  in.snr_threshold_linear = 1.0;
  in.rate_bps = 2.0;
  in.noise_w = 1.0;
  in.path_losses.assign(n, 3.0);
  in.queue_backlogs.assign(n, 1.0);
  in.levels = std::move(levels);
  return in;
}

// Independent reference: enumerate all K2^N level assignments, weight each
// by the product of level probabilities, keep those with no singleton level.
double brute_collision(const CollisionModelInput& in) {
  std::vector<int> assign(in.n_pairs, 1);
  double total = 0.0;
  while (true) {
    std::vector<int> count(in.k2 + 1, 0);
    for (int a : assign) ++count[a];
    bool singleton = false;
    for (int c : count) singleton = singleton || c == 1;
    if (!singleton) {
      double w = 1.0;
      for (int i = 0; i < in.n_pairs; ++i)
        w *= level_probability(in, i, assign[i]);
      total += w;
    }
    int i = 0;
    while (i < in.n_pairs && assign[i] == in.k2) assign[i++] = 1;
    if (i == in.n_pairs) break;
    ++assign[i];
  }
  return total;
}

}  // namespace

TEST_CASE("validate rejects malformed inputs") {
  CollisionModelInput in = symmetric_input(2, {1.0, 4.0});
  CHECK_NOTHROW(in.validate());
  in.levels = {4.0, 1.0};
  CHECK_THROWS_AS(in.validate(), std::invalid_argument);
  in = symmetric_input(2, {1.0, 4.0});
  in.path_losses.pop_back();
  CHECK_THROWS_AS(in.validate(), std::invalid_argument);
}

TEST_CASE("c_coeff hand-computed values and error contract") {
  CollisionModelInput in = symmetric_input(1, {1.0, 4.0});
  CHECK(c_coeff(in, 0, 1) == doctest::Approx(-2.0));  // -6/(1+2)
  CHECK(c_coeff(in, 0, 2) == doctest::Approx(-1.0));  // -6/(4+2)
  CHECK(c_coeff(in, 0, 3) == 0.0);                    // a = +inf
  CHECK_THROWS_AS(c_coeff(in, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(c_coeff(in, 1, 1), std::invalid_argument);

  in.levels = {-5.0, 4.0};  // a_1 + Q*R = -3
  CHECK_THROWS_AS(c_coeff(in, 0, 1), std::domain_error);
}

TEST_CASE("level_probability matches the closed-form bins and sums to one") {
  CollisionModelInput in = symmetric_input(1, {1.0, 4.0});
  // Level 1: P(v <= a_2) = exp(-6/6); level 2: the rest.
  CHECK(level_probability(in, 0, 1) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(level_probability(in, 0, 2) ==
        doctest::Approx(1.0 - 0.36787944117144233).epsilon(1e-14));

  CollisionModelInput wide = symmetric_input(3, {0.5, 2.0, 7.0, 30.0});
  for (int i = 0; i < wide.n_pairs; ++i) {
    double sum = 0.0;
    for (int j = 1; j <= wide.k2; ++j) {
      double p = level_probability(wide, i, j);
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }

  CollisionModelInput single = symmetric_input(1, {1.0});
  CHECK(level_probability(single, 0, 1) == 1.0);
}

TEST_CASE("p_bar base cases and symmetry") {
  CollisionModelInput lone = symmetric_input(1, {1.0, 4.0});
  CHECK(p_bar(lone, 0, 1) == level_probability(lone, 0, 1));

  CollisionModelInput in = symmetric_input(3, {1.0, 4.0, 9.0});
  for (int j = 1; j <= 3; ++j) {
    double ref = level_probability(in, 0, j);
    for (int k = 1; k < 3; ++k) ref *= 1.0 - level_probability(in, k, j);
    CHECK(p_bar(in, 0, j) == doctest::Approx(ref));
    CHECK(p_bar(in, 1, j) == doctest::Approx(p_bar(in, 0, j)));  // symmetry
  }
  CHECK(p_bar_clamp_warnings() == 0);
}

TEST_CASE("collision_probability degenerate cases") {
  CHECK(collision_probability(symmetric_input(1, {1.0, 4.0, 9.0})) == 0.0);
  // K2 = 1: everyone shares the only RE, certain collision for N >= 2.
  CHECK(collision_probability(symmetric_input(2, {1.0})) == 1.0);
  CHECK(collision_probability(symmetric_input(5, {1.0})) == 1.0);
}

TEST_CASE("two symmetric pairs: P_c is the sum of squared level masses") {
  CollisionModelInput in = symmetric_input(2, {1.0, 4.0, 9.0});
  CHECK(collision_probability(in) ==
        doctest::Approx(0.3569061047530069).epsilon(1e-13));
}

TEST_CASE("exact DP matches brute-force assignment enumeration") {
  CollisionModelInput sym = symmetric_input(3, {0.5, 2.0, 7.0, 30.0});
  CHECK(collision_probability(sym) ==
        doctest::Approx(brute_collision(sym)).epsilon(1e-12));

  CollisionModelInput asym = symmetric_input(4, {0.5, 2.0, 7.0});
  asym.path_losses = {1.0, 3.0, 10.0, 0.5};
  asym.queue_backlogs = {1.0, 2.0, 0.5, 4.0};
  CHECK(collision_probability(asym) ==
        doctest::Approx(brute_collision(asym)).epsilon(1e-12));
}

TEST_CASE("closed form agrees with the Monte-Carlo oracle within 3 sigma") {
  Rng rng(2718);
  for (CollisionModelInput in :
       {symmetric_input(2, {1.0, 4.0, 9.0}),
        symmetric_input(3, {0.5, 2.0, 7.0, 30.0}),
        symmetric_input(5, {0.2, 1.0, 3.0, 8.0, 20.0, 60.0})}) {
    double exact = collision_probability(in);
    auto [est, se] = mc_collision_oracle(in, 200000, rng);
    REQUIRE(se > 0.0);
    CHECK(std::abs(est - exact) < 3.0 * se);
  }
}

TEST_CASE("collision probability falls as the grid grows") {
  std::vector<double> levels;
  double prev = 1.0;
  for (int k2 : {2, 4, 8, 16}) {
    levels.clear();
    for (int j = 0; j < k2; ++j)
      levels.push_back(-1.0 + 40.0 * j / (k2 - 1));
    double pc = collision_probability(symmetric_input(4, levels));
    CHECK(pc <= prev + 1e-12);
    prev = pc;
  }
}

TEST_CASE("v_for_epsilon frozen value and properties") {
  // N = K2 = 1: eps' = (1 - sqrt(1-eps))/2 = 0.025658350974743116.
  double v = v_for_epsilon(0.1, 50e3, 500e3, 1000.0, 0.25, 1.0, 1.0, 2.0, 1, 1);
  CHECK(v == doctest::Approx(84454463120370.78).epsilon(1e-12));

  // Larger allowed eps never demands a larger V.
  double prev = v;
  for (double eps : {0.2, 0.4, 0.6, 0.8}) {
    double vi =
        v_for_epsilon(eps, 50e3, 500e3, 1000.0, 0.25, 1.0, 1.0, 2.0, 1, 1);
    CHECK(vi <= prev);
    prev = vi;
  }

  // Tiny link budget product makes the denominator negative: no positive V.
  CHECK_THROWS_AS(
      v_for_epsilon(0.1, 50e3, 500e3, 1000.0, 0.25, 1.0, 1.0, 0.5, 1, 1),
      RegimeError);
  CHECK_THROWS_AS(v_for_epsilon(1.5, 1, 1, 1, 1, 1, 1, 1, 1, 1),
                  std::invalid_argument);
}

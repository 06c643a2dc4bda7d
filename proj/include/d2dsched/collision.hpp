#ifndef D2DSCHED_COLLISION_HPP
#define D2DSCHED_COLLISION_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "d2dsched/rng.hpp"

namespace d2dsched {

// Parameter regime where a requested bound cannot be met (e.g. no positive
// Lyapunov weight achieves the target collision probability).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-rate collision model: N pairs contend for K2 indicator REs; pair i
// has utility v_i = V*S*N_o*L_i/|h_i|^2 - Q_i*R with |h_i|^2 ~ Exp(1) and
// L_i the linear path loss. Levels a_1..a_K2 are the quantization grid;
// all mass below a_1 belongs to level 1 and all mass above a_K2 to level K2
// (a_0 = -inf, a_{K2+1} = +inf convention).
struct CollisionModelInput {
  int n_pairs = 0;
  int k2 = 0;
  double v_weight = 0.0;
  double snr_threshold_linear = 0.0;  // S
  double rate_bps = 0.0;              // R
  double noise_w = 0.0;               // N_o
  std::vector<double> path_losses;    // L_1..L_N, linear loss
  std::vector<double> queue_backlogs; // Q_1..Q_N
  std::vector<double> levels;         // a_1..a_K2, strictly increasing

  void validate() const;
};

// Exponent c_{i,j} = -V*S*N_o*L_i/(a_j + Q_i*R) for 1 <= j <= k2;
// j = k2+1 means a = +inf and gives 0. i is 0-based, j is 1-based.
// Throws std::domain_error when a_j + Q_i*R <= 0.
double c_coeff(const CollisionModelInput& input, int i, int j);

// Probability that pair i (0-based) maps to level j (1-based).
double level_probability(const CollisionModelInput& input, int i, int j);

// Probability that ONLY pair i maps to level j. Clamped to [0,1];
// p_bar_clamp_warnings() counts clamps beyond 1e-12 of drift.
double p_bar(const CollisionModelInput& input, int i, int j);
long p_bar_clamp_warnings();

// Exact overall-collision probability: no RE ends up with exactly one
// occupant. Computed by dynamic programming over (level, set of already
// placed pairs); exact but exponential in N, so N is capped at 20.
double collision_probability(const CollisionModelInput& input);

// Direct event simulation sharing the quantize/resolve code paths with the
// feedback plane. Returns (estimate, binomial standard error).
std::pair<double, double> mc_collision_oracle(const CollisionModelInput& input,
                                              long draws, Rng& rng);

// Lyapunov weight bounding the collision probability by eps over a period
// of t_p slots. Throws RegimeError when no positive V satisfies the bound.
double v_for_epsilon(double eps, double r_th, double rate, double t_p,
                     double p_max, double snr_threshold_linear, double noise_w,
                     double l_min, int n_pairs, int k2);

}  // namespace d2dsched

#endif  // D2DSCHED_COLLISION_HPP

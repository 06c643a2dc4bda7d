#include "d2dsched/collision.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "d2dsched/feedback.hpp"

namespace d2dsched {

namespace {

std::atomic<long> g_clamp_warnings{0};

// P(v_i <= a). Nonpositive denominators carry no mass (v_i > -Q_i*R always).
double utility_cdf(const CollisionModelInput& input, int i, double a) {
  double denom = a + input.queue_backlogs[static_cast<std::size_t>(i)] *
                         input.rate_bps;
  if (denom <= 0.0) return 0.0;
  double c = -input.v_weight * input.snr_threshold_linear * input.noise_w *
             input.path_losses[static_cast<std::size_t>(i)] / denom;
  return std::exp(c);
}

}  // namespace

void CollisionModelInput::validate() const {
  if (n_pairs < 1) throw std::invalid_argument("collision model: n_pairs >= 1");
  if (k2 < 1) throw std::invalid_argument("collision model: k2 >= 1");
  if (path_losses.size() != static_cast<std::size_t>(n_pairs) ||
      queue_backlogs.size() != static_cast<std::size_t>(n_pairs))
    throw std::invalid_argument("collision model: per-pair vectors sized N");
  if (levels.size() != static_cast<std::size_t>(k2))
    throw std::invalid_argument("collision model: levels sized K2");
  for (std::size_t j = 1; j < levels.size(); ++j)
    if (!(levels[j] > levels[j - 1]))
      throw std::invalid_argument("collision model: levels strictly increasing");
}

double c_coeff(const CollisionModelInput& input, int i, int j) {
  if (i < 0 || i >= input.n_pairs)
    throw std::invalid_argument("c_coeff: pair index out of range");
  if (j < 1 || j > input.k2 + 1)
    throw std::invalid_argument("c_coeff: level index out of range");
  if (j == input.k2 + 1) return 0.0;  // a = +inf
  double denom = input.levels[static_cast<std::size_t>(j - 1)] +
                 input.queue_backlogs[static_cast<std::size_t>(i)] *
                     input.rate_bps;
  if (denom <= 0.0)
    throw std::domain_error("c_coeff: nonpositive a_j + Q_i*R");
  return -input.v_weight * input.snr_threshold_linear * input.noise_w *
         input.path_losses[static_cast<std::size_t>(i)] / denom;
}

double level_probability(const CollisionModelInput& input, int i, int j) {
  if (j < 1 || j > input.k2)
    throw std::invalid_argument("level_probability: level index out of range");
  const int k2 = input.k2;
  if (k2 == 1) return 1.0;
  // Quantize-down bins: level 1 <- (-inf, a_2]; level j <- ]a_j, a_{j+1}];
  // level K2 <- ]a_K2, +inf).
  double lo = (j == 1) ? 0.0
                       : utility_cdf(input, i,
                                     input.levels[static_cast<std::size_t>(j - 1)]);
  double hi = (j == k2) ? 1.0
                        : utility_cdf(input, i,
                                      input.levels[static_cast<std::size_t>(j)]);
  return std::max(hi - lo, 0.0);
}

double p_bar(const CollisionModelInput& input, int i, int j) {
  double p = level_probability(input, i, j);
  for (int k = 0; k < input.n_pairs; ++k) {
    if (k == i) continue;
    p *= 1.0 - level_probability(input, k, j);
  }
  if (p < 0.0 || p > 1.0) {
    if (p < -1e-12 || p > 1.0 + 1e-12) ++g_clamp_warnings;
    p = std::clamp(p, 0.0, 1.0);
  }
  return p;
}

long p_bar_clamp_warnings() { return g_clamp_warnings.load(); }

double collision_probability(const CollisionModelInput& input) {
  input.validate();
  const int n = input.n_pairs;
  const int k2 = input.k2;
  if (n > 20)
    throw std::invalid_argument(
        "collision_probability: exact computation capped at N = 20");
  if (n == 1) return 0.0;  // a lone indicator never collides

  // f[S] = P(pairs in S placed within the levels processed so far, with no
  // level holding exactly one of them). Process levels left to right; at
  // each level a subset T of the remaining pairs lands there, |T| != 1.
  const std::size_t n_states = 1ULL << n;
  const std::size_t full = n_states - 1;
  std::vector<double> f(n_states, 0.0), g(n_states, 0.0);
  f[0] = 1.0;
  std::vector<double> pj(static_cast<std::size_t>(n));
  for (int j = 1; j <= k2; ++j) {
    for (int i = 0; i < n; ++i)
      pj[static_cast<std::size_t>(i)] = level_probability(input, i, j);
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t s = 0; s < n_states; ++s) {
      if (f[s] == 0.0) continue;
      std::size_t rem = full & ~s;
      // All submasks t of rem, including empty, excluding singletons.
      std::size_t t = rem;
      while (true) {
        if ((t & (t - 1)) != 0 || t == 0) {  // |t| != 1
          double w = 1.0;
          for (int i = 0; i < n; ++i)
            if (t & (1ULL << i)) w *= pj[static_cast<std::size_t>(i)];
          g[s | t] += f[s] * w;
        }
        if (t == 0) break;
        t = (t - 1) & rem;
      }
    }
    f.swap(g);
  }
  return std::clamp(f[full], 0.0, 1.0);
}

std::pair<double, double> mc_collision_oracle(const CollisionModelInput& input,
                                              long draws, Rng& rng) {
  input.validate();
  if (draws < 1)
    throw std::invalid_argument("mc_collision_oracle: draws >= 1");
  // Shares quantize/resolve with the feedback plane; independence from the
  // closed form comes from simulating the events rather than integrating.
  IndexingMap map{input.levels.front(), input.levels.back(), input.levels};
  long collisions = 0;
  std::vector<std::pair<int, int>> placements(
      static_cast<std::size_t>(input.n_pairs));
  for (long d = 0; d < draws; ++d) {
    for (int i = 0; i < input.n_pairs; ++i) {
      double h2 = rng.exp_unit();
      double v = input.v_weight * input.snr_threshold_linear * input.noise_w *
                     input.path_losses[static_cast<std::size_t>(i)] / h2 -
                 input.queue_backlogs[static_cast<std::size_t>(i)] *
                     input.rate_bps;
      placements[static_cast<std::size_t>(i)] = {i, quantize(v, map).second};
    }
    FrameResolution res = resolve_frame(assemble_frame(placements));
    if (!res.winner) ++collisions;
  }
  double p = static_cast<double>(collisions) / static_cast<double>(draws);
  double stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  return {p, stderr_};
}

double v_for_epsilon(double eps, double r_th, double rate, double t_p,
                     double p_max, double snr_threshold_linear, double noise_w,
                     double l_min, int n_pairs, int k2) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("v_for_epsilon: eps must be in (0,1)");
  if (n_pairs < 1 || k2 < 1)
    throw std::invalid_argument("v_for_epsilon: need n_pairs, k2 >= 1");
  double n = static_cast<double>(n_pairs);
  double k = static_cast<double>(k2);
  double eps_prime =
      (1.0 - std::pow((1.0 - eps) / (n * k), 1.0 / (n + k))) / (2.0 * n);
  if (!(eps_prime > 0.0 && eps_prime < 1.0))
    throw RegimeError("v_for_epsilon: eps' outside (0,1)");
  double log_ep = std::log(eps_prime);
  double denom = p_max * log_ep + snr_threshold_linear * noise_w * l_min;
  if (denom == 0.0)
    throw RegimeError("v_for_epsilon: undefined (zero denominator)");
  double v = -r_th * rate * log_ep * t_p / denom;
  if (!(v > 0.0) || !std::isfinite(v))
    throw RegimeError("v_for_epsilon: no positive V meets the bound");
  return v;
}

}  // namespace d2dsched

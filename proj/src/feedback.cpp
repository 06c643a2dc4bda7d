#include "d2dsched/feedback.hpp"

#include <algorithm>
#include <stdexcept>

namespace d2dsched {

FeedbackCapacity capacities(const ScenarioConfig& cfg) {
  if (cfg.n_rb_feedback < 1)
    throw std::invalid_argument("capacities: n_rb_feedback must be >= 1");
  int c_mux2_num = 12 * cfg.n_oc;
  if (c_mux2_num % cfg.delta_shift != 0)
    throw std::invalid_argument(
        "capacities: delta_shift must divide 12*n_oc");
  FeedbackCapacity cap{12 * cfg.n_rb_feedback,
                       cfg.n_rb_feedback * (c_mux2_num / cfg.delta_shift)};
  // Explicit overrides let small experiments use capacities the PUCCH
  // formula cannot express (e.g. K1 below 12).
  if (cfg.k1_override > 0) cap.k1 = cfg.k1_override;
  if (cfg.k2_override > 0) cap.k2 = cfg.k2_override;
  return cap;
}

IndexingMap build_map(double v_min, double v_max, int k2) {
  if (!(v_min < v_max))
    throw std::invalid_argument("build_map: need v_min < v_max");
  if (k2 < 2) throw std::invalid_argument("build_map: need k2 >= 2");
  IndexingMap map{v_min, v_max, {}};
  map.levels.reserve(static_cast<std::size_t>(k2));
  double step = (v_max - v_min) / (k2 - 1);
  for (int j = 0; j < k2; ++j) map.levels.push_back(v_min + j * step);
  map.levels.back() = v_max;  // no drift at the top endpoint
  return map;
}

std::pair<double, int> quantize(double v, const IndexingMap& map) {
  const auto& a = map.levels;
  if (v <= a.front()) return {a.front(), 1};
  if (v > a.back()) return {a.back(), static_cast<int>(a.size())};
  // Largest level strictly below v.
  auto it = std::lower_bound(a.begin(), a.end(), v);
  std::size_t j = static_cast<std::size_t>(it - a.begin());  // a[j] >= v
  std::size_t idx = (j == 0) ? 0 : j - 1;
  return {a[idx], static_cast<int>(idx + 1)};
}

FeedbackFrame assemble_frame(
    const std::vector<std::pair<int, int>>& placements) {
  FeedbackFrame frame;
  std::vector<int> seen;
  for (auto [pair_id, re] : placements) {
    if (std::find(seen.begin(), seen.end(), pair_id) != seen.end())
      throw std::invalid_argument("assemble_frame: duplicate pair id");
    seen.push_back(pair_id);
    frame.occupancy[re].push_back(pair_id);
  }
  for (auto& [re, ids] : frame.occupancy) std::sort(ids.begin(), ids.end());
  return frame;
}

FrameResolution resolve_frame(const FeedbackFrame& frame) {
  FrameResolution res;
  for (const auto& [re, ids] : frame.occupancy) {  // map iterates in RE order
    if (ids.size() == 1 && !res.winner) res.winner = ids.front();
    if (ids.size() >= 2 && !res.collision_index) res.collision_index = re;
  }
  return res;
}

LyapunovParams update_mapping(LyapunovParams params, int c, int k2) {
  if (c < 1 || c > k2)
    throw std::invalid_argument("update_mapping: collision index out of range");
  params.r = c;
  params.f = (params.r < k2) ? params.f + 1 : 0;
  return params;
}

}  // namespace d2dsched

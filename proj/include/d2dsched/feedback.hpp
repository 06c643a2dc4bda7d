#ifndef D2DSCHED_FEEDBACK_HPP
#define D2DSCHED_FEEDBACK_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "d2dsched/lyapunov.hpp"
#include "d2dsched/scenario.hpp"

namespace d2dsched {

// Per-slot feedback budget: k1 full CSI reports (format 2-style) and k2
// indicator resource elements (format 1-style).
struct FeedbackCapacity {
  int k1 = 0;  // 12 * N_RB
  int k2 = 0;  // N_RB * 12 * N_OC / delta_shift
};

// Throws when delta_shift does not divide 12*N_OC.
FeedbackCapacity capacities(const ScenarioConfig& cfg);

// Uniform level grid a_j = v_min + (j-1)*(v_max-v_min)/(k2-1), j = 1..k2.
struct IndexingMap {
  double v_min = 0.0;
  double v_max = 0.0;
  std::vector<double> levels;
};

IndexingMap build_map(double v_min, double v_max, int k2);

// Quantize down: the largest level strictly below v, clamped to the grid
// ends. Returns (level value, 1-based RE index).
std::pair<double, int> quantize(double v, const IndexingMap& map);

// RE occupancy for one slot. Indicators are content-free: the RE index is
// the only information carried.
struct FeedbackFrame {
  std::map<int, std::vector<int>> occupancy;  // RE index -> pair ids
};

// Throws on a duplicate pair id.
FeedbackFrame assemble_frame(
    const std::vector<std::pair<int, int>>& placements);

struct FrameResolution {
  std::optional<int> winner;           // occupant of the first singleton RE
  std::optional<int> collision_index;  // lowest RE index with >= 2 occupants
};

// Winner = occupant of the lowest singly-occupied RE (colliding pairs are
// unidentifiable and skipped). No winner iff every occupied RE collides.
FrameResolution resolve_frame(const FeedbackFrame& frame);

// Mapping refinement after a collision at RE index c: r <- c, then
// f <- f+1 if r < k2 else f <- 0 (interval enlarge).
LyapunovParams update_mapping(LyapunovParams params, int c, int k2);

}  // namespace d2dsched

#endif  // D2DSCHED_FEEDBACK_HPP

#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "slei/plan.hpp"
#include "slei/world.hpp"

namespace slei {

/// A fixed rendezvous (p_c, t_c).
struct Meeting {
  Voxel location;
  Tick tick = 0;
  RobotId peer = kNoRobot;
};

struct FF3EOptions {
  std::size_t k_cap = 8;
  PathOptions path{};
};

struct FF3EResult {
  LocalPlan plan;  // empty means no feasible plan
  int frontiers_visited = 0;
  bool unreachable = false;  // meeting point cannot be reached at all
  std::vector<Voxel> candidates;  // frontier set after reduction
};

/// Pairwise travel times over one map snapshot, computed lazily with A*.
class TravelTimer {
 public:
  TravelTimer(const LocalMap& map, double speed, PathOptions opts = {}) : map_(map), speed_(speed), opts_(opts) {}
  std::optional<Tick> ticks(const Voxel& a, const Voxel& b);

 private:
  const LocalMap& map_;
  double speed_;
  PathOptions opts_;
  std::map<std::pair<Voxel, Voxel>, std::optional<Tick>> cache_;
};

/// Greedy farthest-point reduction to at most k representatives. The first
/// pick is the frontier nearest to `pose`.
std::vector<Voxel> reduce_frontiers(std::span<const Voxel> frontiers, const Voxel& pose, std::size_t k);

/// Deadline-constrained frontier planner. Visits as many frontiers as possible
/// while still reaching the meeting point by its tick.
FF3EResult ff3e(RobotId owner, const Voxel& pose, Tick now, std::span<const Voxel> frontiers, const Meeting& meeting,
                double speed, const LocalMap& map, const FF3EOptions& opts = {});

/// Receding-horizon replan from the current pose. The Meet step keeps the
/// same location and tick.
FF3EResult adapt_plan(const LocalPlan& current, const Voxel& pose, Tick now, std::span<const Voxel> new_frontiers,
                      const Meeting& meeting, double speed, const LocalMap& map, const FF3EOptions& opts = {});

/// Places worth visiting to learn more about `bbox`: frontiers if any;
/// otherwise known Free cells touching unknown cells of the box; otherwise the
/// unknown cells of the box reachable through unknown space.
std::vector<Voxel> exploration_targets(const LocalMap& map, const BBox& bbox);

/// The exploration targets that have a path from `pose`.
std::vector<Voxel> reachable_targets(const LocalMap& map, const BBox& bbox, const Voxel& pose,
                                     const PathOptions& opts = {});

/// True when no exploration target of `bbox` is reachable from `pose`.
bool bbox_explored(const LocalMap& map, const BBox& bbox, const Voxel& pose, const PathOptions& opts = {});

}  // namespace slei

#pragma once

#include <string>
#include <vector>

#include "slei/geometry.hpp"

namespace slei {

enum class ActionKind : std::uint8_t { Move, Explore, Inspect, Meet, Charge };

const char* to_string(ActionKind a);

struct PlanStep {
  Voxel waypoint;
  Tick arrival = 0;
  ActionKind action = ActionKind::Move;
  int target = -1;    // feature id for Inspect, peer id for Meet
  Tick duration = 0;  // dwell after arrival (inspection, charging)

  auto operator<=>(const PlanStep&) const = default;
};

/// An ordered list of timed waypoints owned by one robot.
struct LocalPlan {
  RobotId owner = kNoRobot;
  Tick issued = 0;
  std::vector<PlanStep> steps;
  Tick horizon_end = 0;

  bool empty() const { return steps.empty(); }
  /// Tick at which the last step is finished, or `issued` for an empty plan.
  Tick end_tick() const { return steps.empty() ? issued : steps.back().arrival + steps.back().duration; }
  Voxel end_position(const Voxel& fallback) const { return steps.empty() ? fallback : steps.back().waypoint; }
  bool arrivals_increasing() const;

  auto operator<=>(const LocalPlan&) const = default;
};

}  // namespace slei

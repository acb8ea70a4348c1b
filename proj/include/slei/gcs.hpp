#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "slei/world.hpp"

namespace slei {

enum class PredictionBasis : std::uint8_t { FeatureRate, VolumeRate };

struct Prediction {
  BBoxId bbox = 0;
  Tick tick = 0;
  PredictionBasis basis = PredictionBasis::VolumeRate;
};

/// Predicted total exploration time of a box from progress so far:
/// (V_B/|S|)(|F|/V_m) t_e, or V_B t_e / V_m when no result exists yet.
/// Rounded up to whole ticks. Throws std::domain_error when V_m <= 0 or t_e <= 0.
Tick predict_completion(double volume_box, double volume_explored, int n_fitted, int n_results, Tick elapsed);
PredictionBasis prediction_basis(int n_results);

/// Nearest voxel to `v` in the plane z = v.z that the map does not mark
/// Occupied, searched in growing square rings.
std::optional<Voxel> nudge_to_free(const LocalMap& map, const Voxel& v);

/// Footprint corners of the box at height `z_level`, nudged off obstacles.
std::vector<Voxel> meeting_corners(const BBox& box, const LocalMap& map, int z_level);

/// Corner whose estimated arrival is closest to `target_tick`; ties go to the
/// lexicographically smaller corner. Falls back to the box entry point.
Voxel select_meeting_corner(const BBox& box, const Voxel& explorer_pose, Tick now, Tick target_tick,
                            const LocalMap& map, double speed, int z_level);

/// Point of the box (at `z_level`) closest to `pose`, nudged off obstacles.
Voxel bbox_entry_point(const BBox& box, const Voxel& pose, const LocalMap& map, int z_level);

struct GcsVisit {
  RobotId explorer = kNoRobot;
  Voxel location;
  Tick tick = 0;

  auto operator<=>(const GcsVisit&) const = default;
};

struct GcsRoute {
  std::vector<GcsVisit> visits;
  std::vector<Tick> arrivals;
  std::vector<GcsVisit> dropped;
  Tick idle = 0;  // sum of max(0, t_c - arrival)
};

using TravelFn = std::function<std::optional<Tick>(const Voxel&, const Voxel&)>;

inline constexpr std::size_t kTspTwExactLimit = 8;

/// Orders meeting visits for the GCS. A visit is served when the GCS arrives
/// no later than t_c + delta; it then stays until t_c. Keeps the largest
/// servable set, then minimises waiting.
GcsRoute schedule_tsp_tw(std::span<const GcsVisit> pending, const Voxel& gcs_pose, Tick now, const TravelFn& travel,
                         Tick delta);

/// Inspectors per subgroup proportional to box volume (floor), remainder to
/// the largest volumes. When there are at least as many inspectors as boxes
/// every subgroup keeps at least one.
std::vector<int> split_inspectors(std::span<const std::int64_t> volumes, int n_inspectors);

/// Cost-units distance from a distance field to the nearest reachable cell of
/// the box, or nullopt.
std::optional<std::int64_t> bbox_distance(std::span<const std::int64_t> field, const Dims& dims, const BBox& box);

/// Explorers in id order each take the nearest Unassigned box.
std::map<RobotId, BBoxId> rolling_assign_initial(const std::vector<BBox>& boxes,
                                                 const std::map<RobotId, Voxel>& explorer_poses, const LocalMap& map);

/// Nearest Unassigned box for one explorer. Boxes in `priority` win first.
std::optional<BBoxId> rolling_assign_next(const std::vector<BBox>& boxes, const Voxel& pose, const LocalMap& map,
                                          const std::set<BBoxId>& priority = {});

struct FleetSize {
  int gcs = 0, explorers = 0, inspectors = 0;
  auto operator<=>(const FleetSize&) const = default;
};

FleetSize fleet_size_guideline(std::span<const std::int64_t> volumes, double v_base);

struct EnergyParams {
  double capacity = 1000.0;     // full charge
  double min_level = 200.0;     // reserve that must never be crossed
  double drain_per_tick = 1.0;  // also scales intervals into energy units
  double charge_per_tick = 100.0;
  Tick charge_duration = 8;     // t_b

  double window() const { return capacity - min_level; }
};

/// Delays a meeting by the recharge cycles the interval since the previous
/// one requires: t_c + ceil(alpha (t_next - t_prev) / (E_max - E_min)) (t_b + T_chg).
Tick retime_for_energy(Tick t_c_next, Tick t_c_prev, const EnergyParams& e, Tick round_trip);

/// GCS-side adjustment. Unchanged when the remaining charge covers the
/// interval, otherwise adds at least one recharge cycle.
Tick gcs_retime_for_energy(Tick t_c, Tick interval, double energy_now, const EnergyParams& e, Tick round_trip);

}  // namespace slei

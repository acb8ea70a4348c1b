#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slei/geometry.hpp"

namespace slei {

enum class Cell : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

/// Ground-truth voxel occupancy. When built as ground truth the outer shell
/// is forced Occupied so the workspace is bounded.
class WorldGrid {
 public:
  WorldGrid() = default;
  WorldGrid(Dims dims, double resolution, bool ground_truth = true);

  const Dims& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  bool ground_truth() const { return ground_truth_; }
  bool contains(const Voxel& v) const { return dims_.contains(v); }

  bool occupied(const Voxel& v) const { return occ_[dims_.index(v)] != 0; }
  Cell cell(const Voxel& v) const { return occupied(v) ? Cell::Occupied : Cell::Free; }
  void set_occupied(const Voxel& v, bool occupied);
  bool on_shell(const Voxel& v) const;

 private:
  Dims dims_{};
  double resolution_ = 1.0;
  bool ground_truth_ = true;
  std::vector<std::uint8_t> occ_;
};

enum class BBoxStatus : std::uint8_t { Unassigned = 0, Assigned = 1, Complete = 2 };

struct BBox {
  BBoxId id = 0;
  Voxel min_corner;
  Voxel max_corner;
  BBoxStatus status = BBoxStatus::Unassigned;
  RobotId assigned_to = kNoRobot;

  std::int64_t volume() const {
    return std::int64_t{max_corner.x - min_corner.x + 1} * (max_corner.y - min_corner.y + 1) *
           (max_corner.z - min_corner.z + 1);
  }
  bool contains(const Voxel& v) const {
    return v.x >= min_corner.x && v.y >= min_corner.y && v.z >= min_corner.z && v.x <= max_corner.x &&
           v.y <= max_corner.y && v.z <= max_corner.z;
  }
  Voxel extent() const {
    return {max_corner.x - min_corner.x + 1, max_corner.y - min_corner.y + 1, max_corner.z - min_corner.z + 1};
  }

  template <typename F>
  void for_each(F&& f) const {
    for (int z = min_corner.z; z <= max_corner.z; ++z)
      for (int y = min_corner.y; y <= max_corner.y; ++y)
        for (int x = min_corner.x; x <= max_corner.x; ++x) f(Voxel{x, y, z});
  }
};

/// Per-robot belief map. Cells only move from Unknown to a known state.
class LocalMap {
 public:
  LocalMap() = default;
  LocalMap(RobotId owner, Dims dims, double resolution);

  RobotId owner() const { return owner_; }
  const Dims& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  bool contains(const Voxel& v) const { return dims_.contains(v); }

  Cell at(const Voxel& v) const { return cells_[dims_.index(v)]; }
  Cell at_index(std::size_t i) const { return cells_[i]; }
  std::size_t size() const { return cells_.size(); }
  bool occupied(const Voxel& v) const { return at(v) == Cell::Occupied; }
  bool known(const Voxel& v) const { return at(v) != Cell::Unknown; }

  /// Writes a known state. Returns true when the cell was Unknown before.
  bool observe(const Voxel& v, Cell c);

  /// Marks the workspace shell Occupied (its bounds are known a priori).
  void seed_shell();

  void track(const BBox& box);
  std::int64_t explored_volume(BBoxId id) const;
  const std::vector<BBox>& tracked() const { return tracked_; }
  std::int64_t unknown_count() const { return unknown_; }

 private:
  RobotId owner_ = kNoRobot;
  Dims dims_{};
  double resolution_ = 1.0;
  std::vector<Cell> cells_;
  std::vector<BBox> tracked_;
  std::map<BBoxId, std::int64_t> explored_;
  std::int64_t unknown_ = 0;
};

enum class FeatureStatus : std::uint8_t { Undiscovered = 0, Fitted = 1, Assigned = 2, Inspected = 3, Collected = 4 };
enum class Priority : std::uint8_t { Normal = 0, High = 1 };

struct Feature {
  FeatureId id = 0;
  Voxel position;
  std::vector<Voxel> aoi;
  FeatureStatus status = FeatureStatus::Undiscovered;
  Tick inspect_duration = 3;
  Priority priority = Priority::Normal;
  RobotId assignee = kNoRobot;
};

/// Moves a feature forward along its lifecycle. Backward moves throw.
void advance_status(Feature& f, FeatureStatus next);

const char* to_string(FeatureStatus s);
const char* to_string(BBoxStatus s);

struct TimedPath {
  std::vector<Voxel> cells;
  std::vector<Tick> arrival;  // offset from departure, per cell
  std::int64_t length_units = 0;
  Tick duration = 0;
};

struct PathOptions {
  std::optional<int> fixed_z;                 // planar motion (ground vehicles)
  std::span<const Voxel> extra_obstacles{};  // transient blockers such as robots
};

/// Line of sight along the 3D Bresenham traversal, endpoints included.
/// Traversal always runs from the lexicographically smaller endpoint, so the
/// result is symmetric.
bool raycast_los(const WorldGrid& grid, const Voxel& a, const Voxel& b);
bool raycast_los(const LocalMap& map, const Voxel& a, const Voxel& b);

/// True when every cell of the traversal, endpoints included, is known Free.
bool clear_line(const LocalMap& map, const Voxel& a, const Voxel& b);

/// Same traversal with endpoints excluded; used for sensing surfaces.
bool visible(const WorldGrid& grid, const Voxel& from, const Voxel& to);

std::vector<Voxel> sense(const WorldGrid& truth, LocalMap& map, const Voxel& pose, double range_m);

/// Where a robot halts for a waypoint the map marks Occupied: the nearest
/// non-Occupied 26-neighbour, ties broken by voxel order. `v` itself when free.
std::optional<Voxel> halt_cell(const LocalMap& map, const Voxel& v);

std::vector<Voxel> frontiers(const LocalMap& map, const BBox& bbox);

std::optional<TimedPath> astar_path(const LocalMap& map, const Voxel& start, const Voxel& goal, double speed,
                                    const PathOptions& opts = {});

/// Single-source shortest path lengths (cost units, -1 when unreachable)
/// over the same graph astar_path searches.
std::vector<std::int64_t> distance_field(const LocalMap& map, const Voxel& source, const PathOptions& opts = {});

std::vector<FeatureId> visible_features(const WorldGrid& truth, std::span<const Feature> features,
                                        const Voxel& pose, double fov_range_m);

/// Marks every Undiscovered feature in view as Fitted and returns those ids.
std::vector<FeatureId> fit_features(const WorldGrid& truth, std::vector<Feature>& features, const Voxel& pose,
                                    double fov_range_m);

struct Footprint {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive voxel rectangle
  bool empty() const { return x1 < x0 || y1 < y0; }
};

struct MarginLimits {
  int min_margin = 0;
  int max_margin = 3;
};

BBox bbox_from_footprint(const Footprint& footprint, int z_base, int z_top, int margin, const Dims& world,
                         const MarginLimits& limits = {}, BBoxId id = 0);

/// Recursive octant subdivision of the bounding box of `unexplored`.
std::vector<BBox> octree_partition(std::span<const Voxel> unexplored, double min_dim_m, double resolution,
                                   BBoxId first_id = 0);

}  // namespace slei

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "slei/world.hpp"

namespace slei {

/// Everything the simulator knows about the physical site.
struct WorldSpec {
  WorldGrid truth;
  std::vector<BBox> bboxes;
  std::vector<Feature> features;
  std::vector<Voxel> charging_stations;
};

nlohmann::json voxel_to_json(const Voxel& v);
Voxel voxel_from_json(const nlohmann::json& j);

/// Occupied voxels are stored as x-runs `[x, y, z, length]`; the boundary
/// shell is implicit.
nlohmann::json world_to_json(const WorldSpec& world);
WorldSpec world_from_json(const nlohmann::json& j);

}  // namespace slei

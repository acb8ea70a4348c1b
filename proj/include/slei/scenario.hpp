#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "slei/sim.hpp"

namespace slei {

/// Parses scenario text. Relative `world_file` paths resolve against
/// `base_dir`. Errors throw ConfigError naming the offending line.
SimConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
SimConfig load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const SimConfig& cfg);
std::string scenario_text(const SimConfig& cfg);

struct GenParams {
  Dims dims{20, 20, 8};
  int n_bboxes = 3;
  int n_features = 12;
  int gcs = 1;
  int explorers = 2;
  int inspectors = 4;
  double resolution = 1.0;
  std::uint64_t seed = 1;
};

/// Random world with one simple structure per box, features on structure
/// faces and every robot starting near the origin corner.
SimConfig gen_scenario(const GenParams& params);

/// The 8-box, 2-explorer, 4-inspector layout used for baseline comparisons.
GenParams scenario_a_params(std::uint64_t seed);

}  // namespace slei

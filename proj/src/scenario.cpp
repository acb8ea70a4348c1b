#include "slei/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "slei/rng.hpp"

namespace slei {

using nlohmann::json;

namespace {

int line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_at(text, pos);
}

[[noreturn]] void fail(const std::string& text, const std::string& key, const std::string& what) {
  throw ConfigError("line " + std::to_string(line_of_key(text, key)) + ": " + what);
}

Role parse_role(const std::string& s) {
  if (s == "gcs") return Role::Gcs;
  if (s == "explorer") return Role::Explorer;
  if (s == "inspector") return Role::Inspector;
  throw ConfigError("unknown role '" + s + "'");
}

std::string role_name(Role r) {
  switch (r) {
    case Role::Gcs: return "gcs";
    case Role::Explorer: return "explorer";
    case Role::Inspector: return "inspector";
  }
  return "explorer";
}

void read_protocol(const json& j, ProtocolParams& p) {
  p.delta = j.value("delta", p.delta);
  p.soei_period = j.value("soei_period", p.soei_period);
  p.replan_period = j.value("replan_period", p.replan_period);
  p.n_samples = j.value("n_samples", p.n_samples);
  p.k_cap = j.value("k_cap", p.k_cap);
  p.arrival_margin = j.value("arrival_margin", p.arrival_margin);
  p.min_interval = j.value("min_interval", p.min_interval);
  p.max_interval = j.value("max_interval", p.max_interval);
  p.initial_explore = j.value("initial_explore", p.initial_explore);
  p.standby_interval = j.value("standby_interval", p.standby_interval);
  if (j.contains("max_wait") && !j.at("max_wait").is_null()) p.max_wait = j.at("max_wait").get<Tick>();
  p.defer_feature_cost = j.value("defer_feature_cost", p.defer_feature_cost);
  p.defer_result_cost = j.value("defer_result_cost", p.defer_result_cost);
  p.partition_min_dim = j.value("partition_min_dim", p.partition_min_dim);
  if (j.contains("ga")) {
    const auto& g = j.at("ga");
    p.ga.population = g.value("population", p.ga.population);
    p.ga.generations = g.value("generations", p.ga.generations);
    p.ga.mutation_rate = g.value("mutation_rate", p.ga.mutation_rate);
    p.ga.elitism = g.value("elitism", p.ga.elitism);
  }
}

json write_protocol(const ProtocolParams& p) {
  json j{{"delta", p.delta},
         {"soei_period", p.soei_period},
         {"replan_period", p.replan_period},
         {"n_samples", p.n_samples},
         {"k_cap", p.k_cap},
         {"arrival_margin", p.arrival_margin},
         {"min_interval", p.min_interval},
         {"max_interval", p.max_interval},
         {"initial_explore", p.initial_explore},
         {"standby_interval", p.standby_interval},
         {"defer_feature_cost", p.defer_feature_cost},
         {"defer_result_cost", p.defer_result_cost},
         {"partition_min_dim", p.partition_min_dim},
         {"ga",
          {{"population", p.ga.population},
           {"generations", p.ga.generations},
           {"mutation_rate", p.ga.mutation_rate},
           {"elitism", p.ga.elitism}}}};
  j["max_wait"] = p.max_wait ? json(*p.max_wait) : json(nullptr);
  return j;
}

}  // namespace

SimConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_at(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("line 1: scenario must be a JSON object");
  SimConfig cfg;
  std::string section = "world";
  try {
    if (j.contains("world")) {
      cfg.world = world_from_json(j.at("world"));
    } else if (j.contains("world_file")) {
      section = "world_file";
      const std::filesystem::path p = base_dir / j.at("world_file").get<std::string>();
      std::ifstream in(p);
      if (!in) fail(text, section, "cannot open world file " + p.string());
      cfg.world = world_from_json(json::parse(in));
    } else {
      throw ConfigError("line 1: scenario needs a world or world_file section");
    }
    section = "fleet";
    const auto& fleet = j.at("fleet");
    if (!fleet.is_array()) fail(text, section, "fleet must be an array");
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const auto& r = fleet[i];
      RobotSpec spec;
      spec.id = static_cast<RobotId>(i);
      spec.role = parse_role(r.at("role").get<std::string>());
      spec.start = voxel_from_json(r.at("start"));
      spec.speed = r.value("speed", spec.speed);
      spec.sensor_range = r.value("sensor_range", spec.sensor_range);
      spec.comm_range = r.value("comm_range", spec.comm_range);
      cfg.robots.push_back(spec);
    }
    section = "protocol";
    if (j.contains("protocol")) read_protocol(j.at("protocol"), cfg.protocol);
    section = "mode";
    if (j.contains("mode")) {
      const auto m = parse_mode(j.at("mode").get<std::string>());
      if (!m) fail(text, section, "unknown mode '" + j.at("mode").get<std::string>() + "'");
      cfg.mode = *m;
    }
    section = "energy";
    if (j.contains("energy")) {
      const auto& e = j.at("energy");
      auto& p = cfg.energy.params;
      cfg.energy.enabled = e.value("enabled", false);
      p.capacity = e.value("capacity", p.capacity);
      p.min_level = e.value("min_level", p.min_level);
      p.drain_per_tick = e.value("drain_per_tick", p.drain_per_tick);
      p.charge_per_tick = e.value("charge_per_tick", p.charge_per_tick);
      p.charge_duration = e.value("charge_duration", p.charge_duration);
      cfg.energy.gcs_capacity_scale = e.value("gcs_capacity_scale", cfg.energy.gcs_capacity_scale);
    }
    section = "failures";
    if (j.contains("failures"))
      for (const auto& f : j.at("failures")) cfg.failures.push_back(FailureSpec{f.at("robot"), f.at("tick")});
    section = "priors";
    cfg.priors = j.value("priors", true);
    section = "seed";
    cfg.seed = j.value("seed", std::uint64_t{1});
    section = "tick_budget";
    cfg.tick_budget = j.value("tick_budget", Tick{0});
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(text, section, e.what());
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    std::string key = "fleet";
    if (msg.find("energy") != std::string::npos || msg.find("charging") != std::string::npos) key = "energy";
    if (msg.find("failure") != std::string::npos) key = "failures";
    if (msg.find("feature") != std::string::npos || msg.find("world") != std::string::npos) key = "world";
    if (msg.find("delta") != std::string::npos || msg.find("interval") != std::string::npos ||
        msg.find("period") != std::string::npos || msg.find("n_samples") != std::string::npos ||
        msg.find("k_cap") != std::string::npos)
      key = "protocol";
    fail(text, key, msg);
  }
  return cfg;
}

SimConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json scenario_to_json(const SimConfig& cfg) {
  json fleet = json::array();
  for (const auto& r : cfg.robots)
    fleet.push_back({{"role", role_name(r.role)},
                     {"start", voxel_to_json(r.start)},
                     {"speed", r.speed},
                     {"sensor_range", r.sensor_range},
                     {"comm_range", r.comm_range}});
  json failures = json::array();
  for (const auto& f : cfg.failures) failures.push_back({{"robot", f.robot}, {"tick", f.tick}});
  const auto& e = cfg.energy.params;
  return json{{"seed", cfg.seed},
              {"mode", to_string(cfg.mode)},
              {"priors", cfg.priors},
              {"tick_budget", cfg.tick_budget},
              {"world", world_to_json(cfg.world)},
              {"fleet", fleet},
              {"protocol", write_protocol(cfg.protocol)},
              {"energy",
               {{"enabled", cfg.energy.enabled},
                {"capacity", e.capacity},
                {"min_level", e.min_level},
                {"drain_per_tick", e.drain_per_tick},
                {"charge_per_tick", e.charge_per_tick},
                {"charge_duration", e.charge_duration},
                {"gcs_capacity_scale", cfg.energy.gcs_capacity_scale}}},
              {"failures", failures}};
}

std::string scenario_text(const SimConfig& cfg) { return scenario_to_json(cfg).dump(2) + "\n"; }

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct Structure {
  Footprint fp;
  int top = 1;
};

bool separated(const BBox& a, const BBox& b) {
  return a.max_corner.x + 1 < b.min_corner.x || b.max_corner.x + 1 < a.min_corner.x ||
         a.max_corner.y + 1 < b.min_corner.y || b.max_corner.y + 1 < a.min_corner.y;
}

constexpr int kStartArea = 4;  // robots start inside [1, kStartArea]^2

}  // namespace

SimConfig gen_scenario(const GenParams& params) {
  const Dims d = params.dims;
  if (d.x < 8 || d.y < 8 || d.z < 4) throw ConfigError("world too small for generation (min 8x8x4)");
  if (params.n_bboxes < 0 || params.n_features < 0 || params.gcs < 1 || params.explorers < 1 ||
      params.inspectors < 0)
    throw ConfigError("generation parameters must be positive");
  const int fleet = params.gcs + params.explorers + params.inspectors;
  if (params.gcs > kStartArea * kStartArea || fleet > kStartArea * kStartArea * 2)
    throw ConfigError("fleet of " + std::to_string(fleet) + " does not fit the start area");

  SeedSplitter seeds(params.seed);
  auto rng = seeds.stream("world");
  SimConfig cfg;
  cfg.seed = params.seed;
  cfg.world.truth = WorldGrid(d, params.resolution, true);
  auto& truth = cfg.world.truth;

  std::vector<Structure> structures;
  const int max_top = std::max(1, d.z - 3);
  for (int attempt = 0; attempt < 4000 && static_cast<int>(structures.size()) < params.n_bboxes; ++attempt) {
    Structure s;
    const int w = draw(rng, 2, 4), h = draw(rng, 2, 4);
    s.fp.x0 = draw(rng, 2, d.x - 3 - w);
    s.fp.y0 = draw(rng, 2, d.y - 3 - h);
    s.fp.x1 = s.fp.x0 + w - 1;
    s.fp.y1 = s.fp.y0 + h - 1;
    s.top = draw(rng, std::min(2, max_top), max_top);
    const Footprint area{s.fp.x0 - 1, s.fp.y0 - 1, s.fp.x1 + 1, s.fp.y1 + 1};
    const BBox box = bbox_from_footprint(area, 1, s.top, 1, d, {}, static_cast<BBoxId>(structures.size()));
    if (box.min_corner.x <= kStartArea && box.min_corner.y <= kStartArea) continue;
    bool ok = true;
    for (const auto& b : cfg.world.bboxes) ok = ok && separated(b, box);
    if (!ok) continue;
    structures.push_back(s);
    cfg.world.bboxes.push_back(box);
  }
  if (static_cast<int>(structures.size()) < params.n_bboxes)
    throw ConfigError("could not place " + std::to_string(params.n_bboxes) + " boxes in the world");
  for (const auto& s : structures)
    for (int z = 1; z <= s.top; ++z)
      for (int y = s.fp.y0; y <= s.fp.y1; ++y)
        for (int x = s.fp.x0; x <= s.fp.x1; ++x) truth.set_occupied({x, y, z}, true);

  // Candidate feature spots: free voxels touching a structure face.
  std::vector<std::vector<Voxel>> spots(structures.size());
  for (std::size_t k = 0; k < structures.size(); ++k) {
    const auto& box = cfg.world.bboxes[k];
    box.for_each([&](const Voxel& v) {
      if (truth.occupied(v) || truth.on_shell(v)) return;
      static constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      for (const auto& st : kSteps) {
        const Voxel n{v.x + st[0], v.y + st[1], v.z + st[2]};
        if (truth.contains(n) && truth.occupied(n) && !truth.on_shell(n)) {
          spots[k].push_back(v);
          return;
        }
      }
    });
  }
  for (int i = 0; i < params.n_features && !structures.empty(); ++i) {
    std::size_t k = static_cast<std::size_t>(i) % structures.size();
    for (std::size_t tries = 0; spots[k].empty() && tries < structures.size(); ++tries) k = (k + 1) % structures.size();
    if (spots[k].empty()) throw ConfigError("no room left for features");
    const std::size_t pick = static_cast<std::size_t>(rng() % spots[k].size());
    Feature f;
    f.id = static_cast<FeatureId>(i);
    f.position = spots[k][pick];
    f.inspect_duration = draw(rng, 2, 4);
    f.priority = rng() % 5 == 0 ? Priority::High : Priority::Normal;
    spots[k].erase(spots[k].begin() + static_cast<std::ptrdiff_t>(pick));
    cfg.world.features.push_back(f);
  }
  cfg.world.charging_stations.push_back(Voxel{1, kStartArea, 1});

  std::vector<Voxel> ground, air;
  for (int y = 1; y <= kStartArea; ++y)
    for (int x = 1; x <= kStartArea; ++x) {
      ground.push_back({x, y, 1});
      air.push_back({x, y, 2});
    }
  std::size_t g_next = 0, a_next = 0;
  const auto place = [&](Role role, double speed, double sensor) {
    RobotSpec r;
    r.id = static_cast<RobotId>(cfg.robots.size());
    r.role = role;
    if (role == Role::Gcs || a_next >= air.size()) {
      r.start = ground.at(g_next++);
    } else {
      r.start = air.at(a_next++);
    }
    r.speed = speed * params.resolution;
    r.sensor_range = sensor * params.resolution;
    r.comm_range = 5.0 * params.resolution;
    cfg.robots.push_back(r);
  };
  for (int i = 0; i < params.gcs; ++i) place(Role::Gcs, 1.0, 2.0);
  for (int i = 0; i < params.explorers; ++i) place(Role::Explorer, 1.0, 3.0);
  for (int i = 0; i < params.inspectors; ++i) place(Role::Inspector, 1.0, 2.0);
  validate(cfg);
  return cfg;
}

GenParams scenario_a_params(std::uint64_t seed) {
  GenParams p;
  p.dims = Dims{36, 28, 8};
  p.n_bboxes = 8;
  p.n_features = 24;
  p.gcs = 1;
  p.explorers = 2;
  p.inspectors = 4;
  p.seed = seed;
  return p;
}

}  // namespace slei

#include "slei/world_io.hpp"

#include <stdexcept>

namespace slei {

using nlohmann::json;

json voxel_to_json(const Voxel& v) { return json::array({v.x, v.y, v.z}); }

Voxel voxel_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("voxel must be an array of 3 integers");
  return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

json world_to_json(const WorldSpec& world) {
  const auto& g = world.truth;
  const auto& d = g.dims();
  json runs = json::array();
  for (int z = 0; z < d.z; ++z)
    for (int y = 0; y < d.y; ++y) {
      int x = 0;
      while (x < d.x) {
        const Voxel v{x, y, z};
        if (!g.occupied(v) || g.on_shell(v)) {
          ++x;
          continue;
        }
        int len = 0;
        while (x + len < d.x && g.occupied({x + len, y, z}) && !g.on_shell({x + len, y, z})) ++len;
        runs.push_back(json::array({x, y, z, len}));
        x += len;
      }
    }
  json boxes = json::array();
  for (const auto& b : world.bboxes)
    boxes.push_back({{"id", b.id}, {"min", voxel_to_json(b.min_corner)}, {"max", voxel_to_json(b.max_corner)}});
  json feats = json::array();
  for (const auto& f : world.features) {
    json jf{{"id", f.id},
            {"position", voxel_to_json(f.position)},
            {"inspect_duration", f.inspect_duration},
            {"priority", f.priority == Priority::High ? "high" : "normal"}};
    if (!(f.aoi.size() == 1 && f.aoi.front() == f.position)) {
      json aoi = json::array();
      for (const auto& v : f.aoi) aoi.push_back(voxel_to_json(v));
      jf["aoi"] = aoi;
    }
    feats.push_back(jf);
  }
  json stations = json::array();
  for (const auto& s : world.charging_stations) stations.push_back(voxel_to_json(s));
  return {{"dims", json::array({d.x, d.y, d.z})},
          {"resolution", g.resolution()},
          {"occupied", runs},
          {"bboxes", boxes},
          {"features", feats},
          {"charging_stations", stations}};
}

WorldSpec world_from_json(const json& j) {
  WorldSpec w;
  const auto& jd = j.at("dims");
  if (!jd.is_array() || jd.size() != 3) throw std::invalid_argument("dims must be [x, y, z]");
  const Dims dims{jd.at(0).get<int>(), jd.at(1).get<int>(), jd.at(2).get<int>()};
  w.truth = WorldGrid(dims, j.value("resolution", 1.0), true);
  for (const auto& r : j.value("occupied", json::array())) {
    if (!r.is_array() || r.size() != 4) throw std::invalid_argument("occupied run must be [x, y, z, length]");
    const int x = r.at(0).get<int>(), y = r.at(1).get<int>(), z = r.at(2).get<int>(), len = r.at(3).get<int>();
    for (int k = 0; k < len; ++k) w.truth.set_occupied({x + k, y, z}, true);
  }
  for (const auto& jb : j.value("bboxes", json::array())) {
    BBox b;
    b.id = jb.at("id").get<int>();
    b.min_corner = voxel_from_json(jb.at("min"));
    b.max_corner = voxel_from_json(jb.at("max"));
    if (b.max_corner.x < b.min_corner.x || b.max_corner.y < b.min_corner.y || b.max_corner.z < b.min_corner.z)
      throw std::invalid_argument("bbox " + std::to_string(b.id) + " has min > max");
    if (!dims.contains(b.min_corner) || !dims.contains(b.max_corner))
      throw std::invalid_argument("bbox " + std::to_string(b.id) + " outside world");
    w.bboxes.push_back(b);
  }
  for (const auto& jf : j.value("features", json::array())) {
    Feature f;
    f.id = jf.at("id").get<int>();
    f.position = voxel_from_json(jf.at("position"));
    if (!dims.contains(f.position)) throw std::invalid_argument("feature " + std::to_string(f.id) + " outside world");
    f.inspect_duration = jf.value("inspect_duration", Tick{3});
    if (f.inspect_duration < 1) throw std::invalid_argument("inspect_duration must be >= 1");
    const auto pr = jf.value("priority", std::string("normal"));
    if (pr != "normal" && pr != "high") throw std::invalid_argument("priority must be normal or high");
    f.priority = pr == "high" ? Priority::High : Priority::Normal;
    if (jf.contains("aoi"))
      for (const auto& v : jf.at("aoi")) f.aoi.push_back(voxel_from_json(v));
    else
      f.aoi = {f.position};
    w.features.push_back(f);
  }
  for (const auto& s : j.value("charging_stations", json::array())) w.charging_stations.push_back(voxel_from_json(s));
  return w;
}

}  // namespace slei

#include "slei/gcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace slei {

Tick predict_completion(double volume_box, double volume_explored, int n_fitted, int n_results, Tick elapsed) {
  if (!(volume_explored > 0.0)) throw std::domain_error("prediction needs explored volume > 0");
  if (elapsed <= 0) throw std::domain_error("prediction needs elapsed time > 0");
  double v;
  if (n_results > 0)
    v = (volume_box / n_results) * (static_cast<double>(n_fitted) / volume_explored) * static_cast<double>(elapsed);
  else
    v = volume_box * static_cast<double>(elapsed) / volume_explored;
  return static_cast<Tick>(std::ceil(v - 1e-9));
}

PredictionBasis prediction_basis(int n_results) {
  return n_results > 0 ? PredictionBasis::FeatureRate : PredictionBasis::VolumeRate;
}

std::optional<Voxel> nudge_to_free(const LocalMap& map, const Voxel& v) {
  const Dims& d = map.dims();
  const int reach = std::max(d.x, d.y);
  for (int r = 0; r <= reach; ++r) {
    std::optional<Voxel> best;
    std::int64_t best_d = 0;
    for (int dx = -r; dx <= r; ++dx)
      for (int dy = -r; dy <= r; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        const Voxel c{v.x + dx, v.y + dy, v.z};
        if (!map.contains(c) || map.occupied(c)) continue;
        const auto dc = squared_distance(c, v);
        if (!best || dc < best_d || (dc == best_d && c < *best)) {
          best = c;
          best_d = dc;
        }
      }
    if (best) return best;
  }
  return std::nullopt;
}

std::vector<Voxel> meeting_corners(const BBox& box, const LocalMap& map, int z_level) {
  std::vector<Voxel> out;
  for (int x : {box.min_corner.x, box.max_corner.x})
    for (int y : {box.min_corner.y, box.max_corner.y}) {
      if (auto c = nudge_to_free(map, {x, y, z_level})) out.push_back(*c);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Voxel bbox_entry_point(const BBox& box, const Voxel& pose, const LocalMap& map, int z_level) {
  const Voxel p{std::clamp(pose.x, box.min_corner.x, box.max_corner.x),
                std::clamp(pose.y, box.min_corner.y, box.max_corner.y), z_level};
  return nudge_to_free(map, p).value_or(p);
}

Voxel select_meeting_corner(const BBox& box, const Voxel& explorer_pose, Tick now, Tick target_tick,
                            const LocalMap& map, double speed, int z_level) {
  std::optional<Voxel> best;
  Tick best_gap = 0;
  for (const auto& c : meeting_corners(box, map, z_level)) {
    const auto path = astar_path(map, explorer_pose, c, speed);
    if (!path) continue;
    const Tick gap = std::abs(now + path->duration - target_tick);
    if (!best || gap < best_gap) {
      best = c;
      best_gap = gap;
    }
  }
  return best ? *best : bbox_entry_point(box, explorer_pose, map, z_level);
}

namespace {

struct RouteEval {
  bool feasible = false;
  Tick idle = 0;
  std::vector<Tick> arrivals;
};

RouteEval evaluate_route(const std::vector<GcsVisit>& route, const Voxel& start, Tick now, const TravelFn& travel,
                         Tick delta) {
  RouteEval ev;
  Voxel pos = start;
  Tick t = now;
  for (const auto& v : route) {
    const auto leg = travel(pos, v.location);
    if (!leg) return ev;
    const Tick arrive = t + *leg;
    if (arrive > v.tick + delta) return ev;
    ev.idle += std::max<Tick>(0, v.tick - arrive);
    ev.arrivals.push_back(arrive);
    t = std::max(arrive, v.tick);
    pos = v.location;
  }
  ev.feasible = true;
  return ev;
}

struct TspSearch {
  const std::vector<GcsVisit>& visits;
  const TravelFn& travel;
  Tick delta;
  std::vector<std::vector<std::optional<Tick>>> legs;
  std::vector<std::optional<Tick>> first;
  std::vector<int> seq, best_seq;
  int best_count = -1;
  Tick best_idle = 0;
  std::vector<bool> used;

  void dfs(int cur, Tick t, Tick idle) {
    const int count = static_cast<int>(seq.size());
    if (count > best_count || (count == best_count && (idle < best_idle || (idle == best_idle && seq < best_seq)))) {
      best_count = count;
      best_idle = idle;
      best_seq = seq;
    }
    for (int j = 0; j < static_cast<int>(visits.size()); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const auto& leg = cur < 0 ? first[static_cast<std::size_t>(j)]
                                : legs[static_cast<std::size_t>(cur)][static_cast<std::size_t>(j)];
      if (!leg) continue;
      const auto& v = visits[static_cast<std::size_t>(j)];
      const Tick arrive = t + *leg;
      if (arrive > v.tick + delta) continue;
      used[static_cast<std::size_t>(j)] = true;
      seq.push_back(j);
      dfs(j, std::max(arrive, v.tick), idle + std::max<Tick>(0, v.tick - arrive));
      seq.pop_back();
      used[static_cast<std::size_t>(j)] = false;
    }
  }
};

}  // namespace

GcsRoute schedule_tsp_tw(std::span<const GcsVisit> pending, const Voxel& gcs_pose, Tick now, const TravelFn& travel,
                         Tick delta) {
  std::vector<GcsVisit> visits(pending.begin(), pending.end());
  std::sort(visits.begin(), visits.end(), [](const GcsVisit& a, const GcsVisit& b) {
    return std::tie(a.tick, a.explorer, a.location) < std::tie(b.tick, b.explorer, b.location);
  });
  GcsRoute route;
  std::vector<bool> kept(visits.size(), false);
  if (visits.size() <= kTspTwExactLimit) {
    TspSearch s{visits, travel, delta, {}, {}, {}, {}, -1, 0, std::vector<bool>(visits.size(), false)};
    const std::size_t n = visits.size();
    s.legs.assign(n, std::vector<std::optional<Tick>>(n));
    s.first.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.first[i] = travel(gcs_pose, visits[i].location);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s.legs[i][j] = travel(visits[i].location, visits[j].location);
    }
    s.dfs(-1, now, 0);
    for (int j : s.best_seq) {
      route.visits.push_back(visits[static_cast<std::size_t>(j)]);
      kept[static_cast<std::size_t>(j)] = true;
    }
  } else {
    for (std::size_t i = 0; i < visits.size(); ++i) {
      std::optional<std::size_t> best_pos;
      Tick best_idle = 0;
      for (std::size_t pos = 0; pos <= route.visits.size(); ++pos) {
        auto cand = route.visits;
        cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(pos), visits[i]);
        const auto ev = evaluate_route(cand, gcs_pose, now, travel, delta);
        if (ev.feasible && (!best_pos || ev.idle < best_idle)) {
          best_pos = pos;
          best_idle = ev.idle;
        }
      }
      if (best_pos) {
        route.visits.insert(route.visits.begin() + static_cast<std::ptrdiff_t>(*best_pos), visits[i]);
        kept[i] = true;
      }
    }
  }
  for (std::size_t i = 0; i < visits.size(); ++i)
    if (!kept[i]) route.dropped.push_back(visits[i]);
  const auto ev = evaluate_route(route.visits, gcs_pose, now, travel, delta);
  route.arrivals = ev.arrivals;
  route.idle = ev.idle;
  return route;
}

std::vector<int> split_inspectors(std::span<const std::int64_t> volumes, int n_inspectors) {
  const std::size_t n = volumes.size();
  std::vector<int> out(n, 0);
  if (n == 0 || n_inspectors <= 0) return out;
  const std::int64_t total = std::accumulate(volumes.begin(), volumes.end(), std::int64_t{0});
  int given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = total > 0 ? static_cast<int>(static_cast<std::int64_t>(n_inspectors) * volumes[i] / total)
                       : n_inspectors / static_cast<int>(n);
    given += out[i];
  }
  std::vector<std::size_t> by_volume(n);
  std::iota(by_volume.begin(), by_volume.end(), 0);
  std::stable_sort(by_volume.begin(), by_volume.end(),
                   [&](std::size_t a, std::size_t b) { return volumes[a] > volumes[b]; });
  for (std::size_t k = 0; given < n_inspectors; k = (k + 1) % n, ++given) ++out[by_volume[k]];
  if (n_inspectors >= static_cast<int>(n)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] > 0) continue;
      std::size_t donor = 0;
      for (std::size_t j = 1; j < n; ++j)
        if (out[j] > out[donor] || (out[j] == out[donor] && volumes[j] > volumes[donor])) donor = j;
      --out[donor];
      ++out[i];
    }
  }
  return out;
}

std::optional<std::int64_t> bbox_distance(std::span<const std::int64_t> field, const Dims& dims, const BBox& box) {
  std::optional<std::int64_t> best;
  box.for_each([&](const Voxel& v) {
    if (!dims.contains(v)) return;
    const auto d = field[dims.index(v)];
    if (d >= 0 && (!best || d < *best)) best = d;
  });
  return best;
}

namespace {

std::optional<BBoxId> nearest_unassigned(const std::vector<BBox>& boxes, std::span<const std::int64_t> field,
                                         const Dims& dims, const Voxel& pose, const std::set<BBoxId>& taken,
                                         const std::set<BBoxId>& priority) {
  std::optional<BBoxId> best;
  std::tuple<int, std::int64_t, BBoxId> best_key{};
  for (const auto& b : boxes) {
    if (b.status != BBoxStatus::Unassigned || taken.count(b.id)) continue;
    auto d = bbox_distance(field, dims, b);
    // Unreachable boxes rank behind reachable ones, by straight-line distance.
    const std::int64_t dist =
        d ? *d
          : std::numeric_limits<std::int64_t>::max() / 2 +
                squared_distance(pose, Voxel{(b.min_corner.x + b.max_corner.x) / 2,
                                             (b.min_corner.y + b.max_corner.y) / 2,
                                             (b.min_corner.z + b.max_corner.z) / 2});
    const std::tuple<int, std::int64_t, BBoxId> key{priority.count(b.id) ? 0 : 1, dist, b.id};
    if (!best || key < best_key) {
      best = b.id;
      best_key = key;
    }
  }
  return best;
}

}  // namespace

std::map<RobotId, BBoxId> rolling_assign_initial(const std::vector<BBox>& boxes,
                                                 const std::map<RobotId, Voxel>& explorer_poses, const LocalMap& map) {
  std::map<RobotId, BBoxId> out;
  std::set<BBoxId> taken;
  for (const auto& [id, pose] : explorer_poses) {
    const auto field = distance_field(map, pose);
    if (auto b = nearest_unassigned(boxes, field, map.dims(), pose, taken, {})) {
      out[id] = *b;
      taken.insert(*b);
    }
  }
  return out;
}

std::optional<BBoxId> rolling_assign_next(const std::vector<BBox>& boxes, const Voxel& pose, const LocalMap& map,
                                          const std::set<BBoxId>& priority) {
  const auto field = distance_field(map, pose);
  return nearest_unassigned(boxes, field, map.dims(), pose, {}, priority);
}

FleetSize fleet_size_guideline(std::span<const std::int64_t> volumes, double v_base) {
  if (!(v_base > 0.0)) throw std::invalid_argument("V_base must be > 0");
  FleetSize f;
  f.gcs = f.explorers = static_cast<int>(volumes.size());
  for (auto v : volumes) f.inspectors += static_cast<int>(std::ceil(2.0 * static_cast<double>(v) / v_base - 1e-9));
  return f;
}

Tick retime_for_energy(Tick t_c_next, Tick t_c_prev, const EnergyParams& e, Tick round_trip) {
  if (!(e.window() > 0.0) || !(e.min_level > 0.0)) throw std::invalid_argument("energy bounds must satisfy E_max > E_min > 0");
  const Tick dt = std::max<Tick>(0, t_c_next - t_c_prev);
  const auto cycles = static_cast<Tick>(std::ceil(e.drain_per_tick * static_cast<double>(dt) / e.window() - 1e-9));
  return t_c_next + cycles * (e.charge_duration + round_trip);
}

Tick gcs_retime_for_energy(Tick t_c, Tick interval, double energy_now, const EnergyParams& e, Tick round_trip) {
  if (e.drain_per_tick <= 0.0 || (energy_now - e.min_level) / e.drain_per_tick >= static_cast<double>(interval))
    return t_c;
  const double need = e.drain_per_tick * static_cast<double>(interval) - energy_now;
  const auto cycles = std::max<Tick>(1, static_cast<Tick>(std::ceil(need / e.window() - 1e-9)));
  return t_c + cycles * (round_trip + e.charge_duration);
}

}  // namespace slei

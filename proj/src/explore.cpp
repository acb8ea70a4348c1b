#include "slei/explore.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>

namespace slei {

std::optional<Tick> TravelTimer::ticks(const Voxel& a, const Voxel& b) {
  if (a == b) return Tick{0};
  const auto key = a < b ? std::pair{a, b} : std::pair{b, a};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::optional<Tick> out;
  if (auto path = astar_path(map_, key.first, key.second, speed_, opts_)) out = path->duration;
  cache_.emplace(key, out);
  return out;
}

std::vector<Voxel> reduce_frontiers(std::span<const Voxel> frontiers, const Voxel& pose, std::size_t k) {
  std::vector<Voxel> in(frontiers.begin(), frontiers.end());
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  if (in.size() <= k) return in;
  std::vector<Voxel> out;
  if (k == 0) return out;
  std::size_t first = 0;
  for (std::size_t i = 1; i < in.size(); ++i)
    if (squared_distance(in[i], pose) < squared_distance(in[first], pose)) first = i;
  std::vector<std::int64_t> dmin(in.size(), std::numeric_limits<std::int64_t>::max());
  std::vector<bool> taken(in.size(), false);
  std::size_t pick = first;
  while (out.size() < k) {
    taken[pick] = true;
    out.push_back(in[pick]);
    std::int64_t best = -1;
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (taken[i]) continue;
      dmin[i] = std::min(dmin[i], squared_distance(in[i], in[pick]));
      if (dmin[i] > best) {
        best = dmin[i];
        pick = i;
      }
    }
    if (best < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Search {
  std::vector<Voxel> nodes;  // frontier candidates
  std::vector<std::optional<Tick>> to_goal;
  std::vector<std::vector<std::optional<Tick>>> between;
  std::vector<std::optional<Tick>> from_start;
  Tick budget = 0;

  int best_count = -1;
  Tick best_arrival = 0;
  std::vector<int> best_seq;
  std::vector<int> seq;
  std::vector<bool> used;

  bool better(int count, Tick arrival) const {
    if (count != best_count) return count > best_count;
    if (arrival != best_arrival) return arrival < best_arrival;
    return std::lexicographical_compare(seq.begin(), seq.end(), best_seq.begin(), best_seq.end(),
                                        [&](int a, int b) { return nodes[a] < nodes[b]; });
  }

  Tick leg(int from, int to) const { return from < 0 ? *from_start[to] : *between[from][to]; }
  bool has_leg(int from, int to) const { return from < 0 ? from_start[to].has_value() : between[from][to].has_value(); }

  void dfs(int cur, Tick t, Tick goal_leg) {
    const int count = static_cast<int>(seq.size());
    const Tick arrival = t + goal_leg;
    if (better(count, arrival)) {
      best_count = count;
      best_arrival = arrival;
      best_seq = seq;
    }
    const int remaining = static_cast<int>(nodes.size()) - count;
    if (count + remaining < best_count) return;
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
      if (used[j] || !to_goal[j] || !has_leg(cur, j)) continue;
      const Tick tj = t + leg(cur, j);
      if (tj + *to_goal[j] > budget) continue;
      used[j] = true;
      seq.push_back(j);
      dfs(j, tj, *to_goal[j]);
      seq.pop_back();
      used[j] = false;
    }
  }
};

}  // namespace

FF3EResult ff3e(RobotId owner, const Voxel& pose, Tick now, std::span<const Voxel> frontiers, const Meeting& meeting,
                double speed, const LocalMap& map, const FF3EOptions& opts) {
  FF3EResult res;
  res.plan.owner = owner;
  res.plan.issued = now;
  res.plan.horizon_end = meeting.tick;
  TravelTimer timer(map, speed, opts.path);
  const auto direct = timer.ticks(pose, meeting.location);
  if (!direct) {
    res.unreachable = true;
    return res;
  }
  const Tick budget = meeting.tick - now;
  if (budget <= 0 || *direct > budget) return res;

  std::vector<Voxel> pool;
  for (const auto& f : frontiers)
    if (f != pose && f != meeting.location && map.contains(f)) pool.push_back(f);
  res.candidates = reduce_frontiers(pool, pose, opts.k_cap);

  Search s;
  s.nodes = res.candidates;
  s.budget = budget;
  const std::size_t n = s.nodes.size();
  s.to_goal.resize(n);
  s.from_start.resize(n);
  s.between.assign(n, std::vector<std::optional<Tick>>(n));
  s.used.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    s.to_goal[i] = timer.ticks(s.nodes[i], meeting.location);
    if (!s.to_goal[i]) continue;
    s.from_start[i] = timer.ticks(pose, s.nodes[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!s.to_goal[i] || !s.to_goal[j] || !s.from_start[i] || !s.from_start[j]) continue;
      s.between[i][j] = s.between[j][i] = timer.ticks(s.nodes[i], s.nodes[j]);
    }
  s.dfs(-1, 0, *direct);

  Tick t = now;
  int prev = -1;
  for (int j : s.best_seq) {
    t += s.leg(prev, j);
    res.plan.steps.push_back({s.nodes[j], t, ActionKind::Explore, -1, 0});
    prev = j;
  }
  t += prev < 0 ? *direct : *s.to_goal[prev];
  res.plan.steps.push_back({meeting.location, t, ActionKind::Meet, meeting.peer, 0});
  res.frontiers_visited = static_cast<int>(s.best_seq.size());
  return res;
}

FF3EResult adapt_plan(const LocalPlan& current, const Voxel& pose, Tick now, std::span<const Voxel> new_frontiers,
                      const Meeting& meeting, double speed, const LocalMap& map, const FF3EOptions& opts) {
  std::vector<Voxel> merged(new_frontiers.begin(), new_frontiers.end());
  for (const auto& step : current.steps)
    if (step.action == ActionKind::Explore && step.arrival >= now) merged.push_back(step.waypoint);
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return ff3e(current.owner, pose, now, merged, meeting, speed, map, opts);
}

namespace {

constexpr std::array<Voxel, 6> kFace{Voxel{-1, 0, 0}, Voxel{1, 0, 0}, Voxel{0, -1, 0},
                                     Voxel{0, 1, 0},  Voxel{0, 0, -1}, Voxel{0, 0, 1}};

}  // namespace

std::vector<Voxel> exploration_targets(const LocalMap& map, const BBox& bbox) {
  auto out = frontiers(map, bbox);
  if (!out.empty()) return out;

  const Dims& d = map.dims();
  for (int x = std::max(0, bbox.min_corner.x - 1); x <= std::min(d.x - 1, bbox.max_corner.x + 1); ++x)
    for (int y = std::max(0, bbox.min_corner.y - 1); y <= std::min(d.y - 1, bbox.max_corner.y + 1); ++y)
      for (int z = std::max(0, bbox.min_corner.z - 1); z <= std::min(d.z - 1, bbox.max_corner.z + 1); ++z) {
        const Voxel v{x, y, z};
        if (map.at(v) != Cell::Free) continue;
        for (const auto& o : kFace) {
          const Voxel w = v + o;
          if (bbox.contains(w) && map.contains(w) && map.at(w) == Cell::Unknown) {
            out.push_back(v);
            break;
          }
        }
      }
  if (!out.empty()) return out;

  // Unknown cells of the box connected to known free space through unknown.
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map.at_index(i) == Cell::Free) {
      seen[i] = 1;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    const Voxel v = d.voxel(i);
    for (const auto& o : kFace) {
      const Voxel w = v + o;
      if (!map.contains(w)) continue;
      const auto wi = d.index(w);
      if (seen[wi] || map.at_index(wi) != Cell::Unknown) continue;
      seen[wi] = 1;
      queue.push_back(wi);
      if (bbox.contains(w)) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Voxel> reachable_targets(const LocalMap& map, const BBox& bbox, const Voxel& pose,
                                     const PathOptions& opts) {
  auto targets = exploration_targets(map, bbox);
  if (targets.empty()) return targets;
  const auto dist = distance_field(map, pose, opts);
  std::vector<Voxel> out;
  for (const auto& t : targets)
    if (dist[map.dims().index(t)] >= 0) out.push_back(t);
  return out;
}

bool bbox_explored(const LocalMap& map, const BBox& bbox, const Voxel& pose, const PathOptions& opts) {
  return reachable_targets(map, bbox, pose, opts).empty();
}

}  // namespace slei

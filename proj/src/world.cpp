#include "slei/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <tuple>

namespace slei {

WorldGrid::WorldGrid(Dims dims, double resolution, bool ground_truth)
    : dims_(dims), resolution_(resolution), ground_truth_(ground_truth) {
  if (dims.x < 1 || dims.y < 1 || dims.z < 1) throw std::invalid_argument("world dims must be >= 1");
  if (!(resolution > 0.0)) throw std::invalid_argument("world resolution must be > 0");
  occ_.assign(static_cast<std::size_t>(dims.volume()), 0);
  if (ground_truth_) {
    for (std::size_t i = 0; i < occ_.size(); ++i)
      if (on_shell(dims_.voxel(i))) occ_[i] = 1;
  }
}

bool WorldGrid::on_shell(const Voxel& v) const {
  return v.x == 0 || v.y == 0 || v.z == 0 || v.x == dims_.x - 1 || v.y == dims_.y - 1 || v.z == dims_.z - 1;
}

void WorldGrid::set_occupied(const Voxel& v, bool occupied) {
  if (!contains(v)) throw std::out_of_range("voxel " + to_string(v) + " outside world");
  if (ground_truth_ && on_shell(v) && !occupied) return;
  occ_[dims_.index(v)] = occupied ? 1 : 0;
}

LocalMap::LocalMap(RobotId owner, Dims dims, double resolution)
    : owner_(owner), dims_(dims), resolution_(resolution) {
  cells_.assign(static_cast<std::size_t>(dims.volume()), Cell::Unknown);
  unknown_ = dims.volume();
}

bool LocalMap::observe(const Voxel& v, Cell c) {
  auto& cell = cells_[dims_.index(v)];
  if (cell != Cell::Unknown || c == Cell::Unknown) return false;
  cell = c;
  --unknown_;
  for (const auto& box : tracked_)
    if (box.contains(v)) ++explored_[box.id];
  return true;
}

void LocalMap::seed_shell() {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Voxel v = dims_.voxel(i);
    if (v.x == 0 || v.y == 0 || v.z == 0 || v.x == dims_.x - 1 || v.y == dims_.y - 1 || v.z == dims_.z - 1)
      observe(v, Cell::Occupied);
  }
}

void LocalMap::track(const BBox& box) {
  for (const auto& b : tracked_)
    if (b.id == box.id) return;
  tracked_.push_back(box);
  std::int64_t n = 0;
  box.for_each([&](const Voxel& v) {
    if (contains(v) && known(v)) ++n;
  });
  explored_[box.id] = n;
}

std::int64_t LocalMap::explored_volume(BBoxId id) const {
  auto it = explored_.find(id);
  return it == explored_.end() ? 0 : it->second;
}

void advance_status(Feature& f, FeatureStatus next) {
  if (static_cast<int>(next) < static_cast<int>(f.status))
    throw std::logic_error("feature " + std::to_string(f.id) + " cannot move from " + to_string(f.status) +
                           " back to " + to_string(next));
  f.status = next;
}

const char* to_string(FeatureStatus s) {
  switch (s) {
    case FeatureStatus::Undiscovered: return "undiscovered";
    case FeatureStatus::Fitted: return "fitted";
    case FeatureStatus::Assigned: return "assigned";
    case FeatureStatus::Inspected: return "inspected";
    case FeatureStatus::Collected: return "collected";
  }
  return "?";
}

const char* to_string(BBoxStatus s) {
  switch (s) {
    case BBoxStatus::Unassigned: return "unassigned";
    case BBoxStatus::Assigned: return "assigned";
    case BBoxStatus::Complete: return "complete";
  }
  return "?";
}

namespace {

// 3D Bresenham from a to b. `visit` returns false to stop early.
template <typename Visit>
bool bresenham(Voxel a, Voxel b, Visit&& visit) {
  if (b < a) std::swap(a, b);
  const int dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y), dz = std::abs(b.z - a.z);
  const int sx = b.x > a.x ? 1 : -1, sy = b.y > a.y ? 1 : -1, sz = b.z > a.z ? 1 : -1;
  Voxel p = a;
  if (!visit(p)) return false;
  if (dx >= dy && dx >= dz) {
    int e1 = 2 * dy - dx, e2 = 2 * dz - dx;
    for (int i = 0; i < dx; ++i) {
      if (e1 > 0) { p.y += sy; e1 -= 2 * dx; }
      if (e2 > 0) { p.z += sz; e2 -= 2 * dx; }
      e1 += 2 * dy;
      e2 += 2 * dz;
      p.x += sx;
      if (!visit(p)) return false;
    }
  } else if (dy >= dx && dy >= dz) {
    int e1 = 2 * dx - dy, e2 = 2 * dz - dy;
    for (int i = 0; i < dy; ++i) {
      if (e1 > 0) { p.x += sx; e1 -= 2 * dy; }
      if (e2 > 0) { p.z += sz; e2 -= 2 * dy; }
      e1 += 2 * dx;
      e2 += 2 * dz;
      p.y += sy;
      if (!visit(p)) return false;
    }
  } else {
    int e1 = 2 * dy - dz, e2 = 2 * dx - dz;
    for (int i = 0; i < dz; ++i) {
      if (e1 > 0) { p.y += sy; e1 -= 2 * dz; }
      if (e2 > 0) { p.x += sx; e2 -= 2 * dz; }
      e1 += 2 * dy;
      e2 += 2 * dx;
      p.z += sz;
      if (!visit(p)) return false;
    }
  }
  return true;
}

template <typename Grid>
void require_inside(const Grid& g, const Voxel& a, const Voxel& b) {
  if (!g.contains(a) || !g.contains(b))
    throw std::out_of_range("raycast endpoint outside grid: " + to_string(a) + " -> " + to_string(b));
}

constexpr std::array<Voxel, 6> kFaceNeighbors{
    Voxel{-1, 0, 0}, Voxel{1, 0, 0}, Voxel{0, -1, 0}, Voxel{0, 1, 0}, Voxel{0, 0, -1}, Voxel{0, 0, 1}};

std::array<Voxel, 26> make_neighbors26() {
  std::array<Voxel, 26> out{};
  std::size_t k = 0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz)
        if (dx || dy || dz) out[k++] = {dx, dy, dz};
  return out;
}

const std::array<Voxel, 26> kNeighbors26 = make_neighbors26();

struct Traversal {
  const LocalMap& map;
  const PathOptions& opts;
  std::vector<std::uint8_t> blocked_extra;

  Traversal(const LocalMap& m, const PathOptions& o) : map(m), opts(o) {
    if (!o.extra_obstacles.empty()) {
      blocked_extra.assign(map.size(), 0);
      for (const auto& v : o.extra_obstacles)
        if (map.contains(v)) blocked_extra[map.dims().index(v)] = 1;
    }
  }

  bool passable(const Voxel& v) const {
    if (!map.contains(v)) return false;
    if (opts.fixed_z && v.z != *opts.fixed_z) return false;
    const auto i = map.dims().index(v);
    if (!blocked_extra.empty() && blocked_extra[i]) return false;
    return map.at_index(i) != Cell::Occupied;
  }
};

std::int64_t octile(const Voxel& a, const Voxel& b) {
  std::array<int, 3> d{std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)};
  std::sort(d.begin(), d.end(), std::greater<>());
  return kCornerCost * d[2] + kEdgeCost * (d[1] - d[2]) + kFaceCost * (d[0] - d[1]);
}

}  // namespace

bool raycast_los(const WorldGrid& grid, const Voxel& a, const Voxel& b) {
  require_inside(grid, a, b);
  return bresenham(a, b, [&](const Voxel& p) { return !grid.occupied(p); });
}

bool raycast_los(const LocalMap& map, const Voxel& a, const Voxel& b) {
  require_inside(map, a, b);
  return bresenham(a, b, [&](const Voxel& p) { return !map.occupied(p); });
}

bool clear_line(const LocalMap& map, const Voxel& a, const Voxel& b) {
  require_inside(map, a, b);
  return bresenham(a, b, [&](const Voxel& p) { return map.at(p) == Cell::Free; });
}

bool visible(const WorldGrid& grid, const Voxel& from, const Voxel& to) {
  return bresenham(from, to, [&](const Voxel& p) { return p == from || p == to || !grid.occupied(p); });
}

std::vector<Voxel> sense(const WorldGrid& truth, LocalMap& map, const Voxel& pose, double range_m) {
  std::vector<Voxel> fresh;
  const double range_vox = range_m / truth.resolution();
  const int r = static_cast<int>(std::floor(range_vox));
  const double r2 = range_vox * range_vox + 1e-9;
  const Dims& d = truth.dims();
  for (int z = std::max(0, pose.z - r); z <= std::min(d.z - 1, pose.z + r); ++z)
    for (int y = std::max(0, pose.y - r); y <= std::min(d.y - 1, pose.y + r); ++y)
      for (int x = std::max(0, pose.x - r); x <= std::min(d.x - 1, pose.x + r); ++x) {
        const Voxel v{x, y, z};
        if (static_cast<double>(squared_distance(v, pose)) > r2) continue;
        if (map.known(v)) continue;
        if (!visible(truth, pose, v)) continue;
        if (map.observe(v, truth.cell(v))) fresh.push_back(v);
      }
  return fresh;
}

std::optional<Voxel> halt_cell(const LocalMap& map, const Voxel& v) {
  if (map.contains(v) && !map.occupied(v)) return v;
  std::optional<Voxel> best;
  int best_d = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Voxel c = v + Voxel{dx, dy, dz};
        if (!map.contains(c) || map.occupied(c)) continue;
        const int d = dx * dx + dy * dy + dz * dz;
        if (!best || d < best_d || (d == best_d && c < *best)) {
          best = c;
          best_d = d;
        }
      }
  return best;
}

std::vector<Voxel> frontiers(const LocalMap& map, const BBox& bbox) {
  std::vector<Voxel> out;
  // Iterate in lexicographic (x, y, z) order.
  for (int x = bbox.min_corner.x; x <= bbox.max_corner.x; ++x)
    for (int y = bbox.min_corner.y; y <= bbox.max_corner.y; ++y)
      for (int z = bbox.min_corner.z; z <= bbox.max_corner.z; ++z) {
        const Voxel v{x, y, z};
        if (!map.contains(v) || map.at(v) != Cell::Free) continue;
        for (const auto& d : kFaceNeighbors) {
          const Voxel n = v + d;
          if (bbox.contains(n) && map.contains(n) && map.at(n) == Cell::Unknown) {
            out.push_back(v);
            break;
          }
        }
      }
  return out;
}

std::optional<TimedPath> astar_path(const LocalMap& map, const Voxel& start, const Voxel& goal, double speed,
                                    const PathOptions& opts) {
  if (!map.contains(start) || !map.contains(goal)) throw std::out_of_range("astar endpoint outside map");
  if (!(speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  TimedPath path;
  if (start == goal) {
    path.cells = {start};
    path.arrival = {0};
    return path;
  }
  Traversal trav(map, opts);
  if (!trav.passable(goal)) return std::nullopt;

  const auto n = map.size();
  const auto& dims = map.dims();
  std::vector<std::int64_t> g(n, -1);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  using Entry = std::tuple<std::int64_t, std::int64_t, std::size_t>;  // f, tiebreak index, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const auto s = dims.index(start), t = dims.index(goal);
  g[s] = 0;
  open.emplace(octile(start, goal), static_cast<std::int64_t>(s), s);
  while (!open.empty()) {
    const auto [f, tie, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == t) break;
    const Voxel uv = dims.voxel(u);
    for (const auto& d : kNeighbors26) {
      const Voxel w = uv + d;
      if (!trav.passable(w)) continue;
      const auto wi = dims.index(w);
      if (closed[wi]) continue;
      const auto cand = g[u] + step_cost(d);
      if (g[wi] < 0 || cand < g[wi]) {
        g[wi] = cand;
        parent[wi] = static_cast<std::int32_t>(u);
        open.emplace(cand + octile(w, goal), static_cast<std::int64_t>(wi), wi);
      }
    }
  }
  if (g[t] < 0) return std::nullopt;
  std::vector<std::size_t> rev;
  for (auto cur = static_cast<std::int64_t>(t); cur >= 0; cur = parent[static_cast<std::size_t>(cur)]) {
    rev.push_back(static_cast<std::size_t>(cur));
    if (static_cast<std::size_t>(cur) == s) break;
  }
  std::reverse(rev.begin(), rev.end());
  std::int64_t cum = 0;
  for (std::size_t i = 0; i < rev.size(); ++i) {
    const Voxel v = dims.voxel(rev[i]);
    if (i > 0) cum += step_cost(v - path.cells.back());
    path.cells.push_back(v);
    path.arrival.push_back(travel_ticks(cum, map.resolution(), speed));
  }
  path.length_units = cum;
  path.duration = path.arrival.back();
  return path;
}

std::vector<std::int64_t> distance_field(const LocalMap& map, const Voxel& source, const PathOptions& opts) {
  const auto n = map.size();
  std::vector<std::int64_t> dist(n, -1);
  Traversal trav(map, opts);
  if (!map.contains(source)) return dist;
  const auto& dims = map.dims();
  using Entry = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const auto s = dims.index(source);
  dist[s] = 0;
  open.emplace(0, s);
  std::vector<std::uint8_t> closed(n, 0);
  while (!open.empty()) {
    const auto [du, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    const Voxel uv = dims.voxel(u);
    for (const auto& d : kNeighbors26) {
      const Voxel w = uv + d;
      if (!trav.passable(w)) continue;
      const auto wi = dims.index(w);
      const auto cand = du + step_cost(d);
      if (dist[wi] < 0 || cand < dist[wi]) {
        dist[wi] = cand;
        open.emplace(cand, wi);
      }
    }
  }
  return dist;
}

std::vector<FeatureId> visible_features(const WorldGrid& truth, std::span<const Feature> features,
                                        const Voxel& pose, double fov_range_m) {
  std::vector<FeatureId> out;
  const double range_vox = fov_range_m / truth.resolution();
  for (const auto& f : features) {
    if (euclidean(pose, f.position) > range_vox + 1e-9) continue;
    if (!visible(truth, pose, f.position)) continue;
    out.push_back(f.id);
  }
  return out;
}

std::vector<FeatureId> fit_features(const WorldGrid& truth, std::vector<Feature>& features, const Voxel& pose,
                                    double fov_range_m) {
  std::vector<FeatureId> fitted;
  const auto seen = visible_features(truth, features, pose, fov_range_m);
  for (auto& f : features) {
    if (f.status != FeatureStatus::Undiscovered) continue;
    if (std::find(seen.begin(), seen.end(), f.id) == seen.end()) continue;
    advance_status(f, FeatureStatus::Fitted);
    fitted.push_back(f.id);
  }
  return fitted;
}

BBox bbox_from_footprint(const Footprint& footprint, int z_base, int z_top, int margin, const Dims& world,
                         const MarginLimits& limits, BBoxId id) {
  if (footprint.empty()) throw std::invalid_argument("empty footprint");
  if (margin < limits.min_margin || margin > limits.max_margin)
    throw std::invalid_argument("vertical margin " + std::to_string(margin) + " outside [" +
                                std::to_string(limits.min_margin) + ", " + std::to_string(limits.max_margin) + "]");
  if (z_top < z_base) throw std::invalid_argument("z_top below z_base");
  BBox box;
  box.id = id;
  box.min_corner = {std::max(0, footprint.x0), std::max(0, footprint.y0), std::max(0, z_base - margin)};
  box.max_corner = {std::min(world.x - 1, footprint.x1), std::min(world.y - 1, footprint.y1),
                    std::min(world.z - 1, z_top + margin)};
  if (box.max_corner.x < box.min_corner.x || box.max_corner.y < box.min_corner.y ||
      box.max_corner.z < box.min_corner.z)
    throw std::invalid_argument("footprint lies outside the world");
  return box;
}

namespace {

void octree_recurse(const Voxel& lo, const Voxel& hi, std::vector<Voxel>& pts, double min_dim_vox,
                    std::vector<BBox>& out) {
  if (pts.empty()) return;
  const Voxel ext{hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1};
  const int min_ext = std::min({ext.x, ext.y, ext.z});
  if (static_cast<double>(min_ext) <= min_dim_vox + 1e-9 || (ext.x == 1 && ext.y == 1 && ext.z == 1)) {
    BBox b;
    b.min_corner = lo;
    b.max_corner = hi;
    out.push_back(b);
    return;
  }
  const Voxel mid{lo.x + ext.x / 2, lo.y + ext.y / 2, lo.z + ext.z / 2};
  for (int ox = 0; ox < 2; ++ox)
    for (int oy = 0; oy < 2; ++oy)
      for (int oz = 0; oz < 2; ++oz) {
        const Voxel clo{ox ? mid.x : lo.x, oy ? mid.y : lo.y, oz ? mid.z : lo.z};
        const Voxel chi{ox ? hi.x : mid.x - 1, oy ? hi.y : mid.y - 1, oz ? hi.z : mid.z - 1};
        if (chi.x < clo.x || chi.y < clo.y || chi.z < clo.z) continue;
        std::vector<Voxel> sub;
        for (const auto& p : pts)
          if (p.x >= clo.x && p.x <= chi.x && p.y >= clo.y && p.y <= chi.y && p.z >= clo.z && p.z <= chi.z)
            sub.push_back(p);
        octree_recurse(clo, chi, sub, min_dim_vox, out);
      }
}

}  // namespace

std::vector<BBox> octree_partition(std::span<const Voxel> unexplored, double min_dim_m, double resolution,
                                   BBoxId first_id) {
  if (unexplored.empty()) return {};
  Voxel lo = unexplored.front(), hi = unexplored.front();
  for (const auto& v : unexplored) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  std::vector<Voxel> pts(unexplored.begin(), unexplored.end());
  std::vector<BBox> out;
  octree_recurse(lo, hi, pts, min_dim_m / resolution, out);
  for (auto& b : out) b.id = first_id++;
  return out;
}

}  // namespace slei

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

namespace slei {

using Tick = std::int64_t;
using RobotId = int;
using FeatureId = int;
using BBoxId = int;

inline constexpr Tick kNoTick = std::numeric_limits<Tick>::max() / 4;
inline constexpr RobotId kNoRobot = -1;

/// Integer voxel coordinate. Ordering is lexicographic (x, y, z), which is the
/// tie-break order used throughout the planners.
struct Voxel {
  int x = 0;
  int y = 0;
  int z = 0;

  auto operator<=>(const Voxel&) const = default;

  Voxel operator+(const Voxel& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Voxel operator-(const Voxel& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

inline double euclidean(const Voxel& a, const Voxel& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline std::int64_t squared_distance(const Voxel& a, const Voxel& b) {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline int chebyshev(const Voxel& a, const Voxel& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

inline std::string to_string(const Voxel& v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.z) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Voxel& v) { return os << to_string(v); }

struct Dims {
  int x = 1;
  int y = 1;
  int z = 1;

  bool operator==(const Dims&) const = default;
  std::int64_t volume() const { return std::int64_t{x} * y * z; }
  bool contains(const Voxel& v) const {
    return v.x >= 0 && v.y >= 0 && v.z >= 0 && v.x < x && v.y < y && v.z < z;
  }
  std::size_t index(const Voxel& v) const {
    return static_cast<std::size_t>(v.x) +
           static_cast<std::size_t>(x) * (static_cast<std::size_t>(v.y) + static_cast<std::size_t>(y) * v.z);
  }
  Voxel voxel(std::size_t i) const {
    const auto xs = static_cast<std::size_t>(x), ys = static_cast<std::size_t>(y);
    return {static_cast<int>(i % xs), static_cast<int>((i / xs) % ys), static_cast<int>(i / (xs * ys))};
  }
};

/// Travel cost units: one face step is 1000, edge and corner diagonals are the
/// rounded multiples of sqrt(2) and sqrt(3). Integer costs keep A* and
/// Dijkstra distances bit-identical.
inline constexpr std::int64_t kFaceCost = 1000;
inline constexpr std::int64_t kEdgeCost = 1414;
inline constexpr std::int64_t kCornerCost = 1732;

inline std::int64_t step_cost(const Voxel& d) {
  const int n = (d.x != 0) + (d.y != 0) + (d.z != 0);
  return n == 1 ? kFaceCost : n == 2 ? kEdgeCost : kCornerCost;
}

/// Converts a path length in cost units to whole ticks at `speed` m/tick.
inline Tick travel_ticks(std::int64_t units, double resolution, double speed) {
  if (units <= 0) return 0;
  const double meters = static_cast<double>(units) / static_cast<double>(kFaceCost) * resolution;
  return static_cast<Tick>(std::ceil(meters / speed - 1e-9));
}

}  // namespace slei

template <>
struct std::hash<slei::Voxel> {
  std::size_t operator()(const slei::Voxel& v) const noexcept {
    std::size_t h = static_cast<std::size_t>(v.x) * 73856093u;
    h ^= static_cast<std::size_t>(v.y) * 19349663u;
    h ^= static_cast<std::size_t>(v.z) * 83492791u;
    return h;
  }
};

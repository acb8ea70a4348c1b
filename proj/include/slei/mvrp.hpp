#pragma once

#include <cstdint>
#include <vector>

namespace slei {

/// Open-route multi-vehicle routing over a fixed cost matrix. Negative costs
/// mark missing edges. High-priority visits must precede normal ones within
/// every route.
struct MvrpInstance {
  std::vector<std::vector<std::int64_t>> start_cost;  // [vehicle][visit]
  std::vector<std::vector<std::int64_t>> cost;        // [visit][visit]
  std::vector<bool> high;                             // per visit, may be empty

  int vehicles() const { return static_cast<int>(start_cost.size()); }
  int visits() const { return static_cast<int>(cost.size()); }
  bool is_high(int j) const { return !high.empty() && high[static_cast<std::size_t>(j)]; }
};

struct MvrpSolution {
  std::vector<std::vector<int>> routes;  // per vehicle, visit indices in order
  std::int64_t cost = 0;
  bool feasible = false;
};

/// Cost of one route, or -1 when it uses a missing edge or breaks precedence.
std::int64_t route_cost(const MvrpInstance& inst, int vehicle, const std::vector<int>& route);
std::int64_t solution_cost(const MvrpInstance& inst, const std::vector<std::vector<int>>& routes);

inline constexpr int kMvrpExactLimit = 9;

/// Branch and bound with a dominance table over (vehicle, last visit, visited set).
MvrpSolution solve_mvrp_exact(const MvrpInstance& inst);
/// Nearest-neighbour construction followed by 2-opt, relocate, swap and or-opt.
MvrpSolution solve_mvrp_heuristic(const MvrpInstance& inst);
/// Exact up to kMvrpExactLimit visits, heuristic above.
MvrpSolution solve_mvrp(const MvrpInstance& inst);

}  // namespace slei

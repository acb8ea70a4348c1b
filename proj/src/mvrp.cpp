#include "slei/mvrp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace slei {

std::int64_t route_cost(const MvrpInstance& inst, int vehicle, const std::vector<int>& route) {
  std::int64_t total = 0;
  bool normal_seen = false;
  int prev = -1;
  for (int j : route) {
    if (inst.is_high(j) && normal_seen) return -1;
    if (!inst.is_high(j)) normal_seen = true;
    const auto c = prev < 0 ? inst.start_cost[static_cast<std::size_t>(vehicle)][static_cast<std::size_t>(j)]
                            : inst.cost[static_cast<std::size_t>(prev)][static_cast<std::size_t>(j)];
    if (c < 0) return -1;
    total += c;
    prev = j;
  }
  return total;
}

std::int64_t solution_cost(const MvrpInstance& inst, const std::vector<std::vector<int>>& routes) {
  std::int64_t total = 0;
  for (int v = 0; v < static_cast<int>(routes.size()); ++v) {
    const auto c = route_cost(inst, v, routes[static_cast<std::size_t>(v)]);
    if (c < 0) return -1;
    total += c;
  }
  return total;
}

namespace {

struct BranchAndBound {
  const MvrpInstance& inst;
  int n;
  int full;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<std::vector<int>> routes, best_routes;
  std::unordered_map<std::uint64_t, std::int64_t> memo;

  explicit BranchAndBound(const MvrpInstance& i) : inst(i), n(i.visits()), full((1 << i.visits()) - 1) {
    routes.resize(static_cast<std::size_t>(i.vehicles()));
  }

  std::uint64_t key(int v, int last, int mask, bool normal_seen) const {
    return (((static_cast<std::uint64_t>(v) * 64 + static_cast<std::uint64_t>(last + 1)) << 20) |
            static_cast<std::uint64_t>(mask)) * 2 + (normal_seen ? 1 : 0);
  }

  // Cheapest possible edge into each unvisited node; an admissible bound.
  std::int64_t lower_bound(int v, int mask) const {
    std::int64_t lb = 0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) continue;
      std::int64_t m = std::numeric_limits<std::int64_t>::max();
      for (int u = v; u < inst.vehicles(); ++u) {
        const auto c = inst.start_cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
        if (c >= 0) m = std::min(m, c);
      }
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const auto c = inst.cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (c >= 0) m = std::min(m, c);
      }
      if (m == std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max() / 4;
      lb += m;
    }
    return lb;
  }

  void search(int v, int last, int mask, bool normal_seen, std::int64_t cost) {
    if (mask == full) {
      if (cost < best) {
        best = cost;
        best_routes = routes;
      }
      return;
    }
    if (v >= inst.vehicles()) return;
    if (cost + lower_bound(v, mask) >= best) return;
    const auto k = key(v, last, mask, normal_seen);
    auto it = memo.find(k);
    if (it != memo.end() && it->second <= cost) return;
    memo[k] = cost;
    auto& route = routes[static_cast<std::size_t>(v)];
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) continue;
      if (inst.is_high(j) && normal_seen) continue;
      const auto c = last < 0 ? inst.start_cost[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)]
                              : inst.cost[static_cast<std::size_t>(last)][static_cast<std::size_t>(j)];
      if (c < 0) continue;
      route.push_back(j);
      search(v, j, mask | (1 << j), normal_seen || !inst.is_high(j), cost + c);
      route.pop_back();
    }
    search(v + 1, -1, mask, false, cost);
  }
};

}  // namespace

MvrpSolution solve_mvrp_exact(const MvrpInstance& inst) {
  MvrpSolution sol;
  sol.routes.resize(static_cast<std::size_t>(inst.vehicles()));
  if (inst.visits() == 0) {
    sol.feasible = true;
    return sol;
  }
  if (inst.visits() > 20) throw std::invalid_argument("exact MVRP limited to 20 visits");
  if (inst.vehicles() == 0) return sol;
  BranchAndBound bb(inst);
  bb.search(0, -1, 0, false, 0);
  if (bb.best_routes.empty()) return sol;
  sol.routes = bb.best_routes;
  sol.cost = bb.best;
  sol.feasible = true;
  return sol;
}

namespace {

bool improve_once(const MvrpInstance& inst, std::vector<std::vector<int>>& routes, std::int64_t& total) {
  const int nv = static_cast<int>(routes.size());
  auto try_accept = [&](std::vector<std::vector<int>>& cand) {
    const auto c = solution_cost(inst, cand);
    if (c >= 0 && c < total) {
      routes = cand;
      total = c;
      return true;
    }
    return false;
  };
  // 2-opt within a route.
  for (int v = 0; v < nv; ++v) {
    const int len = static_cast<int>(routes[static_cast<std::size_t>(v)].size());
    for (int i = 0; i < len; ++i)
      for (int j = i + 1; j < len; ++j) {
        auto cand = routes;
        auto& r = cand[static_cast<std::size_t>(v)];
        std::reverse(r.begin() + i, r.begin() + j + 1);
        if (try_accept(cand)) return true;
      }
  }
  // Or-opt: move a segment of 1..3 visits anywhere (relocate is length 1).
  for (int v = 0; v < nv; ++v) {
    const int len = static_cast<int>(routes[static_cast<std::size_t>(v)].size());
    for (int seg = 1; seg <= 3; ++seg)
      for (int i = 0; i + seg <= len; ++i)
        for (int w = 0; w < nv; ++w) {
          const int wlen = static_cast<int>(routes[static_cast<std::size_t>(w)].size()) - (w == v ? seg : 0);
          for (int pos = 0; pos <= wlen; ++pos) {
            if (w == v && pos == i) continue;
            auto cand = routes;
            auto& src = cand[static_cast<std::size_t>(v)];
            std::vector<int> moved(src.begin() + i, src.begin() + i + seg);
            src.erase(src.begin() + i, src.begin() + i + seg);
            auto& dst = cand[static_cast<std::size_t>(w)];
            dst.insert(dst.begin() + pos, moved.begin(), moved.end());
            if (try_accept(cand)) return true;
          }
        }
  }
  // Swap two visits, within or across routes.
  for (int v = 0; v < nv; ++v)
    for (int w = v; w < nv; ++w) {
      const int lv = static_cast<int>(routes[static_cast<std::size_t>(v)].size());
      const int lw = static_cast<int>(routes[static_cast<std::size_t>(w)].size());
      for (int i = 0; i < lv; ++i)
        for (int j = (v == w ? i + 1 : 0); j < lw; ++j) {
          auto cand = routes;
          std::swap(cand[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)],
                    cand[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)]);
          if (try_accept(cand)) return true;
        }
    }
  return false;
}

}  // namespace

MvrpSolution solve_mvrp_heuristic(const MvrpInstance& inst) {
  MvrpSolution sol;
  const int nv = inst.vehicles(), n = inst.visits();
  sol.routes.resize(static_cast<std::size_t>(nv));
  if (n == 0) {
    sol.feasible = true;
    return sol;
  }
  if (nv == 0) return sol;
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::vector<int> last(static_cast<std::size_t>(nv), -1);
  for (int placed = 0; placed < n; ++placed) {
    bool highs_left = false;
    for (int j = 0; j < n; ++j)
      if (!done[static_cast<std::size_t>(j)] && inst.is_high(j)) highs_left = true;
    std::int64_t best = -1;
    int bv = -1, bj = -1;
    for (int v = 0; v < nv; ++v)
      for (int j = 0; j < n; ++j) {
        if (done[static_cast<std::size_t>(j)] || (highs_left && !inst.is_high(j))) continue;
        const int l = last[static_cast<std::size_t>(v)];
        const auto c = l < 0 ? inst.start_cost[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)]
                             : inst.cost[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        if (c < 0) continue;
        if (best < 0 || c < best) {
          best = c;
          bv = v;
          bj = j;
        }
      }
    if (bv < 0) return sol;
    sol.routes[static_cast<std::size_t>(bv)].push_back(bj);
    last[static_cast<std::size_t>(bv)] = bj;
    done[static_cast<std::size_t>(bj)] = true;
  }
  auto total = solution_cost(inst, sol.routes);
  if (total < 0) return sol;
  while (improve_once(inst, sol.routes, total)) {
  }
  sol.cost = total;
  sol.feasible = true;
  return sol;
}

MvrpSolution solve_mvrp(const MvrpInstance& inst) {
  return inst.visits() <= kMvrpExactLimit ? solve_mvrp_exact(inst) : solve_mvrp_heuristic(inst);
}

}  // namespace slei

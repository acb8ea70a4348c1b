#pragma once

// Random solver instances and exhaustive optima shared by the unit tests and
// the acceptance run.

#include <limits>
#include <optional>
#include <random>

#include "oracles.hpp"
#include "slei/explore.hpp"
#include "slei/gcs.hpp"
#include "slei/mvrp.hpp"
#include "slei/subgroup.hpp"

namespace oracle {

using namespace slei;

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// unit speed on a 1 m grid: ticks are cost units rounded up to whole metres
inline Tick ticks_of(std::int64_t units) { return (units + 999) / 1000; }

struct Ff3eInstance {
  WorldGrid truth{Dims{10, 10, 5}, 1.0, true};
  LocalMap map{0, Dims{10, 10, 5}, 1.0};
  Voxel pose;
  Meeting meeting;
  std::vector<Voxel> frontiers;
};

inline Ff3eInstance random_ff3e(std::mt19937_64& rng, int n_frontiers) {
  Ff3eInstance in;
  in.truth = random_grid({10, 10, 5}, 0.15, rng);
  in.map = LocalMap(0, in.truth.dims(), 1.0);
  std::bernoulli_distribution known(0.7);
  for (std::size_t i = 0; i < in.map.size(); ++i) {
    const Voxel v = in.truth.dims().voxel(i);
    // the shell is always known so nobody plans through the world edge
    const bool edge = v.x == 0 || v.y == 0 || v.z == 0 || v.x == 9 || v.y == 9 || v.z == 4;
    if (edge || known(rng)) in.map.observe(v, in.truth.cell(v));
  }
  auto cells = free_cells(in.map);
  std::shuffle(cells.begin(), cells.end(), rng);
  in.pose = cells[0];
  in.meeting.location = cells[1];
  for (int k = 0; k < n_frontiers; ++k) in.frontiers.push_back(cells[2 + k]);
  return in;
}

// Exhaustive optimum: most frontiers visited with arrival at the meeting by its tick.
inline int ff3e_oracle(const Ff3eInstance& in, Tick budget) {
  std::vector<Voxel> nodes = in.frontiers;
  nodes.push_back(in.pose);
  nodes.push_back(in.meeting.location);
  const int n = static_cast<int>(in.frontiers.size());
  std::vector<std::vector<std::int64_t>> d(nodes.size(), std::vector<std::int64_t>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) d[i][j] = shortest_units(in.map, nodes[i], nodes[j]);
  const int start = n, goal = n + 1;
  int best = -1;
  for_each_sequence(n, [&](const std::vector<int>& seq) {
    if (static_cast<int>(seq.size()) <= best) return;
    Tick t = 0;
    int cur = start;
    for (int j : seq) {
      if (d[cur][j] < 0) return;
      t += ticks_of(d[cur][j]);
      cur = j;
    }
    if (d[cur][goal] < 0) return;
    t += ticks_of(d[cur][goal]);
    if (t <= budget) best = static_cast<int>(seq.size());
  });
  return best;
}

// Best open-route cost per (vehicle, visit subset) by Held-Karp, then the best
// partition of all visits over the vehicles.
inline std::int64_t mvrp_oracle(const MvrpInstance& inst) {
  const int n = inst.visits(), m = inst.vehicles();
  const unsigned full = (1u << n) - 1;
  std::vector<std::vector<std::int64_t>> route(m, std::vector<std::int64_t>(1u << n, kInf));
  for (int v = 0; v < m; ++v) {
    std::vector<std::vector<std::int64_t>> dp(1u << n, std::vector<std::int64_t>(n, kInf));
    route[v][0] = 0;
    for (int j = 0; j < n; ++j)
      if (inst.start_cost[v][j] >= 0) dp[1u << j][j] = inst.start_cost[v][j];
    for (unsigned s = 1; s <= full; ++s)
      for (int last = 0; last < n; ++last) {
        if (dp[s][last] >= kInf) continue;
        route[v][s] = std::min(route[v][s], dp[s][last]);
        bool has_normal = false;
        for (int j = 0; j < n; ++j)
          if ((s & (1u << j)) && !inst.is_high(j)) has_normal = true;
        for (int j = 0; j < n; ++j) {
          if (s & (1u << j) || inst.cost[last][j] < 0) continue;
          if (inst.is_high(j) && has_normal) continue;
          auto& d = dp[s | (1u << j)][j];
          d = std::min(d, dp[s][last] + inst.cost[last][j]);
        }
      }
  }
  std::vector<std::int64_t> part(1u << n, kInf);
  part[0] = 0;
  for (int v = 0; v < m; ++v) {
    auto next = part;
    for (unsigned s = 0; s <= full; ++s) {
      if (part[s] >= kInf) continue;
      const unsigned rest = full & ~s;
      for (unsigned t = rest; t; t = (t - 1) & rest)
        if (route[v][t] < kInf) next[s | t] = std::min(next[s | t], part[s] + route[v][t]);
    }
    part = std::move(next);
  }
  return part[full] >= kInf ? -1 : part[full];
}

inline MvrpInstance random_mvrp(std::mt19937_64& rng, int visits, int vehicles, bool with_high, double missing) {
  std::uniform_int_distribution<int> coord(0, 20);
  std::bernoulli_distribution gone(missing), hi(0.3);
  std::vector<std::pair<int, int>> pts(visits), starts(vehicles);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  for (auto& p : starts) p = {coord(rng), coord(rng)};
  auto dist = [](auto a, auto b) { return std::int64_t{std::abs(a.first - b.first) + std::abs(a.second - b.second)}; };
  MvrpInstance inst;
  inst.cost.assign(visits, std::vector<std::int64_t>(visits, -1));
  for (int i = 0; i < visits; ++i)
    for (int j = i + 1; j < visits; ++j)
      if (!gone(rng)) inst.cost[i][j] = inst.cost[j][i] = dist(pts[i], pts[j]);
  for (int v = 0; v < vehicles; ++v) {
    inst.start_cost.emplace_back();
    for (int j = 0; j < visits; ++j) inst.start_cost[v].push_back(gone(rng) ? -1 : dist(starts[v], pts[j]));
  }
  if (with_high)
    for (int j = 0; j < visits; ++j) inst.high.push_back(hi(rng));
  return inst;
}

struct SoeiCase {
  WorldGrid truth{Dims{8, 8, 4}, 1.0, true};
  LocalMap map{0, Dims{8, 8, 4}, 1.0};
  SoeiInput input;
};

inline SoeiCase random_soei(std::mt19937_64& rng) {
  SoeiCase c;
  c.truth = random_grid({8, 8, 4}, 0.1, rng);
  c.map = full_map(c.truth);
  auto cells = free_cells(c.map);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::uniform_int_distribution<int> ni(1, 3), ns(1, 3), nf(0, 4), pend(0, 2), beg(0, 12), len(0, 15), coin(0, 2);
  std::size_t k = 0;
  auto& in = c.input;
  in.explorer = 0;
  in.now = 10;
  in.map = &c.map;
  in.pose = cells[k++];
  const int n_insp = ni(rng);
  for (int j = 0; j < n_insp; ++j) {
    InspectorView v{10 + j, cells[k++], {}, pend(rng)};
    in.inspectors.push_back(v);
    std::vector<MeetSample> s;
    const int n_s = ns(rng);
    for (int q = 0; q < n_s; ++q) {
      MeetSample m;
      m.point = cells[k++];
      m.peer_waypoint = v.pose;
      m.window_begin = in.now + beg(rng);
      if (coin(rng) == 0) {
        m.window_end = m.window_begin + len(rng);
      } else {
        m.idle_from = m.window_begin;
      }
      s.push_back(m);
    }
    in.samples.push_back(std::move(s));
  }
  const int n_f = nf(rng);
  for (int f = 0; f < n_f; ++f)
    in.features.push_back({100 + f, cells[k++], 3, coin(rng) == 0 ? Priority::High : Priority::Normal});
  if (coin(rng) == 0) in.deadline = Meeting{cells[k++], in.now + 20 + beg(rng) * 3};
  return c;
}

// Every subset, order, sample choice and feature routing, costed from
// Bellman-Ford distances.
inline std::int64_t soei_oracle(const SoeiCase& c, const SoeiParams& p) {
  const auto& in = c.input;
  auto t = [&](const Voxel& a, const Voxel& b) -> std::optional<Tick> {
    const auto u = shortest_units(c.map, a, b);
    if (u < 0) return std::nullopt;
    return ticks_of(u);
  };
  const int n = static_cast<int>(in.inspectors.size());
  std::int64_t pending = 0;
  for (const auto& v : in.inspectors) pending += v.pending_results;
  std::int64_t best = p.defer_feature_cost * static_cast<std::int64_t>(in.features.size()) + p.defer_result_cost * pending;

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    std::int64_t skipped = 0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) members.push_back(j);
      else skipped += in.inspectors[j].pending_results;
    }
    const int k = static_cast<int>(members.size());

    std::int64_t best_meet = kInf;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<int> choice(k, 0);
      while (true) {
        Voxel pos = in.pose;
        Tick now = in.now;
        std::int64_t idle = 0;
        bool ok = true;
        for (int q : order) {
          const auto& s = in.samples[members[q]][choice[q]];
          const auto leg = t(pos, s.point);
          if (!leg) { ok = false; break; }
          const Tick arrive = now + *leg;
          const Tick tj = std::max(arrive, s.window_begin);
          if (tj > s.window_end) { ok = false; break; }
          idle += *leg + (tj - arrive);
          if (s.idle_from < kOpenEnded) idle += std::max<Tick>(0, tj - s.idle_from);
          pos = s.point;
          now = tj;
        }
        if (ok && in.deadline) {
          const auto leg = t(pos, in.deadline->location);
          ok = leg && now + *leg <= in.deadline->tick;
        }
        if (ok) best_meet = std::min(best_meet, idle);
        int i = 0;
        while (i < k && ++choice[i] == static_cast<int>(in.samples[members[i]].size())) choice[i++] = 0;
        if (i == k) break;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    if (best_meet >= kInf) continue;

    // feature routing: every assignment to members, every order per member
    const int nf = static_cast<int>(in.features.size());
    std::int64_t best_route = nf == 0 ? 0 : kInf;
    std::vector<int> owner(nf, 0);
    while (nf > 0) {
      std::int64_t total = 0;
      bool ok = true;
      for (int q = 0; q < k && ok; ++q) {
        std::vector<int> mine;
        for (int f = 0; f < nf; ++f)
          if (owner[f] == q) mine.push_back(f);
        std::int64_t best_mine = kInf;
        do {
          bool seen_normal = false, valid = true;
          std::int64_t cost = 0;
          Voxel at = in.inspectors[members[q]].pose;
          for (int f : mine) {
            const bool high = in.features[f].priority == Priority::High;
            if (high && seen_normal) valid = false;
            seen_normal = seen_normal || !high;
            const auto leg = t(at, in.features[f].position);
            if (!leg) valid = false;
            if (!valid) break;
            cost += *leg;
            at = in.features[f].position;
          }
          if (valid) best_mine = std::min(best_mine, cost);
        } while (std::next_permutation(mine.begin(), mine.end()));
        if (best_mine >= kInf) ok = false;
        total += best_mine;
      }
      if (ok) best_route = std::min(best_route, total);
      int i = 0;
      while (i < nf && ++owner[i] == k) owner[i++] = 0;
      if (i == nf) break;
    }
    if (best_route >= kInf) continue;
    best = std::min(best, best_meet + best_route + p.defer_result_cost * skipped);
  }
  return best;
}

inline std::optional<Tick> manhattan(const Voxel& a, const Voxel& b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

struct TspCase {
  std::vector<GcsVisit> visits;
  Voxel start;
  Tick delta = 0;
};

inline TspCase random_tsp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 15), n(1, 4), due(0, 40), dl(0, 6);
  TspCase c;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) c.visits.push_back({i + 1, {coord(rng), coord(rng), 1}, due(rng)});
  c.delta = dl(rng);
  c.start = {coord(rng), coord(rng), 1};
  return c;
}

/// Most visits served, then least GCS waiting, over every ordered subset.
inline std::pair<int, Tick> tsp_oracle(const TspCase& c) {
  int best_count = -1;
  Tick best_idle = 0;
  for_each_sequence(static_cast<int>(c.visits.size()), [&](const std::vector<int>& seq) {
    Voxel at = c.start;
    Tick t = 0, idle = 0;
    for (int j : seq) {
      const auto& v = c.visits[j];
      const Tick arrive = t + *manhattan(at, v.location);
      if (arrive > v.tick + c.delta) return;
      idle += std::max<Tick>(0, v.tick - arrive);
      t = std::max(arrive, v.tick);
      at = v.location;
    }
    const int k = static_cast<int>(seq.size());
    if (k > best_count || (k == best_count && idle < best_idle)) {
      best_count = k;
      best_idle = idle;
    }
  });
  return {best_count, best_idle};
}

}  // namespace oracle

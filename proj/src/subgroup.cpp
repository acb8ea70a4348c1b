#include "slei/subgroup.hpp"

#include "slei/gcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slei {

namespace {

struct Window {
  Voxel waypoint;
  Tick begin, end, idle_from;
};

std::vector<Window> inspector_windows(const InspectorView& insp, Tick now) {
  std::vector<Window> out;
  for (const auto& s : insp.plan.steps) {
    if (s.action != ActionKind::Inspect && s.action != ActionKind::Charge) continue;
    if (s.arrival + s.duration < now) continue;
    out.push_back({s.waypoint, std::max(s.arrival, now), s.arrival + s.duration, kOpenEnded});
  }
  const Tick end = insp.plan.empty() ? now : std::max(insp.plan.end_tick(), now);
  out.push_back({insp.plan.end_position(insp.pose), end, kOpenEnded, end});
  return out;
}

}  // namespace

std::vector<std::vector<MeetSample>> sample_los(const LocalMap& map, std::span<const InspectorView> inspectors,
                                                const Voxel& explorer_pose, Tick now, const LinkSpec& link,
                                                int n_samples) {
  std::vector<std::vector<MeetSample>> out;
  const double rvox = link.range_m / map.resolution();
  const int r = static_cast<int>(std::floor(rvox + 1e-9));
  const double r2 = rvox * rvox + 1e-9;
  for (const auto& insp : inspectors) {
    // Candidates per window, nearest to the explorer first.
    std::vector<std::vector<MeetSample>> per_window;
    for (auto w : inspector_windows(insp, now)) {
      if (!map.contains(w.waypoint)) continue;
      // A waypoint inside an obstacle: the inspector halts next to it.
      if (map.occupied(w.waypoint)) {
        const auto free = halt_cell(map, w.waypoint);
        if (!free) continue;
        w.waypoint = *free;
      }
      std::vector<MeetSample> cands;
      std::vector<std::pair<bool, std::size_t>> keys;
      for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy + dz * dz > r2) continue;
            const Voxel p = w.waypoint + Voxel{dx, dy, dz};
            if (p == w.waypoint || !map.contains(p) || map.occupied(p)) continue;
            if (link.requires_los && !raycast_los(map, p, w.waypoint)) continue;
            keys.push_back({!clear_line(map, p, w.waypoint), cands.size()});
            cands.push_back({p, w.waypoint, w.begin, w.end, w.idle_from});
          }
      // Points with a line known to be clear come first.
      std::sort(keys.begin(), keys.end(), [&](const auto& ka, const auto& kb) {
        if (ka.first != kb.first) return kb.first;
        const auto& a = cands[ka.second];
        const auto& b = cands[kb.second];
        const auto da = squared_distance(a.point, explorer_pose), db = squared_distance(b.point, explorer_pose);
        return da != db ? da < db : a.point < b.point;
      });
      std::vector<MeetSample> sorted;
      for (const auto& k : keys) sorted.push_back(cands[k.second]);
      cands = std::move(sorted);
      if (!cands.empty()) per_window.push_back(std::move(cands));
    }
    std::vector<MeetSample> chosen;
    for (std::size_t rank = 0; static_cast<int>(chosen.size()) < n_samples; ++rank) {
      std::vector<MeetSample> layer;
      for (const auto& c : per_window)
        if (rank < c.size()) layer.push_back(c[rank]);
      if (layer.empty()) break;
      std::stable_sort(layer.begin(), layer.end(), [&](const MeetSample& a, const MeetSample& b) {
        return squared_distance(a.point, explorer_pose) < squared_distance(b.point, explorer_pose);
      });
      for (const auto& s : layer)
        if (static_cast<int>(chosen.size()) < n_samples) chosen.push_back(s);
    }
    out.push_back(std::move(chosen));
  }
  return out;
}

OptMeetResult opt_meet(RobotId explorer, std::span<const MeetSample> sequence, std::span<const RobotId> peers,
                       const Voxel& pose, Tick now, TravelTimer& timer, const std::optional<Meeting>& deadline) {
  OptMeetResult res;
  Voxel pos = pose;
  Tick t = now;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const auto& s = sequence[k];
    const auto leg = timer.ticks(pos, s.point);
    if (!leg) return res;
    const Tick arrive = t + *leg;
    const Tick tj = std::max(arrive, s.window_begin);
    if (tj > s.window_end) return res;
    res.travel += *leg;
    res.explorer_wait += tj - arrive;
    if (s.idle_from < kOpenEnded) res.inspector_wait += std::max<Tick>(0, tj - s.idle_from);
    res.meetings.push_back({s.point, tj, explorer, peers[k], MeetingStatus::Confirmed, 0});
    pos = s.point;
    t = tj;
  }
  if (deadline) {
    const auto leg = timer.ticks(pos, deadline->location);
    if (!leg || t + *leg > deadline->tick) return res;
  }
  res.end_position = pos;
  res.end_tick = t;
  res.feasible = true;
  return res;
}

AllocationResult allocate_features(std::span<const InspectorView> chosen, std::span<const FeatureTask> features,
                                   TravelTimer& inspector_timer, Tick now) {
  AllocationResult res;
  if (features.empty()) {
    res.feasible = true;
    return res;
  }
  if (chosen.empty()) return res;
  MvrpInstance inst;
  const std::size_t n = features.size();
  inst.cost.assign(n, std::vector<std::int64_t>(n, -1));
  inst.high.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.high[i] = features[i].priority == Priority::High;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (j < i) {
        inst.cost[i][j] = inst.cost[j][i];
        continue;
      }
      const auto t = inspector_timer.ticks(features[i].position, features[j].position);
      inst.cost[i][j] = t ? *t : -1;
    }
  }
  for (const auto& insp : chosen) {
    std::vector<std::int64_t> row(n, -1);
    const Voxel start = insp.plan.end_position(insp.pose);
    for (std::size_t j = 0; j < n; ++j) {
      const auto t = inspector_timer.ticks(start, features[j].position);
      row[j] = t ? *t : -1;
    }
    inst.start_cost.push_back(std::move(row));
  }
  const auto sol = solve_mvrp(inst);
  if (!sol.feasible) return res;
  res.feasible = true;
  res.travel = sol.cost;
  for (std::size_t v = 0; v < chosen.size(); ++v) {
    const auto& insp = chosen[v];
    const auto& route = sol.routes[v];
    if (route.empty()) continue;
    Tick t = std::max(insp.plan.empty() ? now : insp.plan.end_tick(), now);
    int prev = -1;
    auto& steps = res.appended[insp.id];
    auto& alloc = res.allocation[insp.id];
    for (int j : route) {
      const auto& f = features[static_cast<std::size_t>(j)];
      t += prev < 0 ? inst.start_cost[v][static_cast<std::size_t>(j)]
                    : inst.cost[static_cast<std::size_t>(prev)][static_cast<std::size_t>(j)];
      if (!steps.empty() && t <= steps.back().arrival) t = steps.back().arrival + 1;
      steps.push_back({f.position, t, ActionKind::Inspect, f.id, f.inspect_duration});
      alloc.push_back(f.id);
      t += f.inspect_duration;
      prev = j;
    }
  }
  return res;
}

SequenceChoice best_sequence(RobotId explorer, std::span<const RobotId> subset,
                             const std::vector<const std::vector<MeetSample>*>& samples, const Voxel& pose, Tick now,
                             TravelTimer& timer, const std::optional<Meeting>& deadline, const SoeiParams& params,
                             std::mt19937_64& rng) {
  SequenceChoice best;
  const std::size_t k = subset.size();
  if (k == 0) {
    best.timing = opt_meet(explorer, {}, {}, pose, now, timer, deadline);
    return best;
  }
  std::int64_t space = 1;
  for (std::size_t i = 0; i < k; ++i) {
    space *= static_cast<std::int64_t>(samples[i]->size());
    if (space == 0) return best;
  }
  for (std::size_t i = 2; i <= k; ++i) space *= static_cast<std::int64_t>(i);

  auto evaluate = [&](const std::vector<int>& order, const std::vector<int>& choice) {
    std::vector<MeetSample> seq;
    std::vector<RobotId> peers;
    for (int idx : order) {
      seq.push_back((*samples[static_cast<std::size_t>(idx)])[static_cast<std::size_t>(choice[static_cast<std::size_t>(idx)])]);
      peers.push_back(subset[static_cast<std::size_t>(idx)]);
    }
    return opt_meet(explorer, seq, peers, pose, now, timer, deadline);
  };

  if (space <= params.exact_limit) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<int> choice(k, 0);
      while (true) {
        auto timing = evaluate(order, choice);
        if (timing.feasible && (!best.timing.feasible || timing.idle() < best.timing.idle())) {
          best.timing = std::move(timing);
          best.order = order;
          best.choice = choice;
        }
        std::size_t i = 0;
        while (i < k && ++choice[i] == static_cast<int>(samples[i]->size())) choice[i++] = 0;
        if (i == k) break;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
  }

  std::vector<int> options;
  for (std::size_t i = 0; i < k; ++i) options.push_back(static_cast<int>(samples[i]->size()));
  const auto ga = run_ga(
      options,
      [&](const Chromosome& c) -> std::optional<std::int64_t> {
        const auto t = evaluate(c.order, c.choice);
        if (!t.feasible) return std::nullopt;
        return t.idle();
      },
      rng, params.ga);
  best.used_ga = true;
  if (ga.cost) {
    best.timing = evaluate(ga.best.order, ga.best.choice);
    best.order = ga.best.order;
    best.choice = ga.best.choice;
  }
  return best;
}

SubgroupPlan soei(SoeiInput in, const SoeiParams& params, std::mt19937_64& rng) {
  const auto& map = *in.map;
  if (in.samples.empty())
    in.samples = sample_los(map, in.inspectors, in.pose, in.now, in.link, params.n_samples);
  TravelTimer timer(map, in.speed);
  TravelTimer insp_timer(map, in.inspector_speed);

  const std::size_t n = in.inspectors.size();
  std::int64_t all_pending = 0;
  for (const auto& insp : in.inspectors) all_pending += insp.pending_results;

  SubgroupPlan best;
  best.objective = params.defer_feature_cost * static_cast<std::int64_t>(in.features.size()) +
                   params.defer_result_cost * all_pending;

  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<RobotId> subset;
    std::vector<InspectorView> members;
    std::vector<const std::vector<MeetSample>*> samples;
    std::int64_t skipped_pending = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        subset.push_back(in.inspectors[j].id);
        members.push_back(in.inspectors[j]);
        samples.push_back(&in.samples[j]);
      } else {
        skipped_pending += in.inspectors[j].pending_results;
      }
    }
    auto seq = best_sequence(in.explorer, subset, samples, in.pose, in.now, timer, in.deadline, params, rng);
    if (!seq.timing.feasible) continue;
    auto alloc = allocate_features(members, in.features, insp_timer, in.now);
    if (!alloc.feasible) continue;
    const std::int64_t objective = seq.timing.idle() + alloc.travel + params.defer_result_cost * skipped_pending;
    if (objective < best.objective) {
      best = SubgroupPlan{};
      best.chosen = subset;
      best.meetings = seq.timing.meetings;
      best.allocation = std::move(alloc.allocation);
      best.appended = std::move(alloc.appended);
      best.idle_plus = seq.timing.idle();
      best.idle_minus = alloc.travel;
      best.objective = objective;
      best.used_ga = seq.used_ga;
    }
  }
  return best;
}

}  // namespace slei

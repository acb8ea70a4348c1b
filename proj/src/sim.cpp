#include "slei/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace slei {

using nlohmann::json;

const char* to_string(Role r) {
  switch (r) {
    case Role::Gcs: return "gcs";
    case Role::Explorer: return "explorer";
    case Role::Inspector: return "inspector";
  }
  return "?";
}

const char* to_string(RobotStatus s) {
  switch (s) {
    case RobotStatus::Active: return "active";
    case RobotStatus::Charging: return "charging";
    case RobotStatus::Failed: return "failed";
    case RobotStatus::Standby: return "standby";
  }
  return "?";
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Slei3d: return "slei3d";
    case Mode::SleiFix: return "slei-fix";
    case Mode::SleiPre: return "slei-pre";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "slei3d") return Mode::Slei3d;
  if (s == "slei-fix") return Mode::SleiFix;
  if (s == "slei-pre") return Mode::SleiPre;
  return std::nullopt;
}

void EventLog::add(Tick tick, std::string actor, std::string kind, json payload) {
  events_.push_back({tick, std::move(actor), std::move(kind), std::move(payload)});
}

std::string EventLog::to_ndjson() const {
  std::string out;
  for (const auto& e : events_) {
    json j{{"tick", e.tick}, {"actor", e.actor}, {"kind", e.kind}, {"payload", e.payload}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::size_t EventLog::count(const std::string& kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [&](const Event& e) { return e.kind == kind; }));
}

void validate(const SimConfig& cfg) {
  const auto& g = cfg.world.truth;
  if (g.dims().volume() <= 1) throw ConfigError("world is empty");
  if (cfg.robots.empty()) throw ConfigError("fleet is empty");
  std::set<Voxel> starts;
  int n_gcs = 0, n_exp = 0;
  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    const auto& r = cfg.robots[i];
    if (r.id != static_cast<RobotId>(i)) throw ConfigError("robot ids must be 0..n-1 in order");
    if (!g.contains(r.start) || g.occupied(r.start))
      throw ConfigError("robot " + std::to_string(r.id) + " starts in an occupied or outside voxel");
    if (!starts.insert(r.start).second) throw ConfigError("robots " + std::to_string(r.id) + " share a start voxel");
    if (!(r.speed > 0.0) || r.speed > g.resolution() + 1e-9)
      throw ConfigError("robot " + std::to_string(r.id) + " speed must be in (0, resolution]");
    if (!(r.comm_range > 0.0)) throw ConfigError("comm range must be > 0");
    if (!(r.sensor_range >= g.resolution())) throw ConfigError("sensor range must cover one voxel");
    if (r.role == Role::Gcs) ++n_gcs;
    if (r.role == Role::Explorer) ++n_exp;
    if (r.role == Role::Gcs && (r.start.z != 1 || g.occupied({r.start.x, r.start.y, 0}) == false))
      throw ConfigError("GCS " + std::to_string(r.id) + " must start on the ground (z = 1)");
  }
  if (n_gcs == 0) throw ConfigError("fleet needs at least one GCS");
  if (n_exp == 0) throw ConfigError("fleet needs at least one explorer");
  const auto& p = cfg.protocol;
  if (p.delta < 0) throw ConfigError("delta must be >= 0");
  if (p.soei_period < 1 || p.replan_period < 1) throw ConfigError("planning periods must be >= 1");
  if (p.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (p.k_cap < 1) throw ConfigError("k_cap must be >= 1");
  if (p.min_interval < 1 || p.max_interval < p.min_interval) throw ConfigError("meeting interval bounds invalid");
  if (cfg.energy.enabled) {
    const auto& e = cfg.energy.params;
    if (!(e.capacity > e.min_level && e.min_level > 0.0)) throw ConfigError("energy needs capacity > min_level > 0");
    if (!(e.charge_per_tick > 0.0) || !(e.drain_per_tick > 0.0)) throw ConfigError("energy rates must be > 0");
    if (cfg.world.charging_stations.empty()) throw ConfigError("energy enabled but no charging stations");
    for (const auto& s : cfg.world.charging_stations)
      if (!g.contains(s) || g.occupied(s)) throw ConfigError("charging station " + to_string(s) + " is not free");
  }
  for (const auto& f : cfg.failures)
    if (f.robot < 0 || f.robot >= static_cast<RobotId>(cfg.robots.size()) || f.tick < 0)
      throw ConfigError("failure entry refers to unknown robot or negative tick");
  for (const auto& f : cfg.world.features)
    if (g.occupied(f.position)) throw ConfigError("feature " + std::to_string(f.id) + " sits in an occupied voxel");
}

Tick default_tick_budget(const SimConfig& cfg) {
  const auto& d = cfg.world.truth.dims();
  const double diag = std::sqrt(double(d.x) * d.x + double(d.y) * d.y + double(d.z) * d.z);
  double range = 1.0;
  for (const auto& r : cfg.robots)
    if (r.role == Role::Explorer) range = std::max(range, r.sensor_range / cfg.world.truth.resolution());
  double volume = 0.0;
  for (const auto& b : cfg.world.bboxes) volume += static_cast<double>(b.volume());
  if (cfg.world.bboxes.empty()) volume = static_cast<double>(d.volume());
  return std::max<Tick>(2000, static_cast<Tick>(std::ceil(20.0 * (diag + volume / (range * range)))));
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)), seeds_(cfg_.seed) {
  validate(cfg_);
  ga_rng_ = seeds_.stream("ga");
  budget_ = cfg_.tick_budget > 0 ? cfg_.tick_budget : default_tick_budget(cfg_);
  init();
}

std::string Simulator::actor(RobotId id) const {
  return std::string(to_string(robots_[static_cast<std::size_t>(id)].spec.role)) + ":" + std::to_string(id);
}

const LocalMap& Simulator::nav_map(const Robot& r) const {
  return r.spec.role == Role::Explorer ? r.store.map : r.nav;
}

PathOptions Simulator::path_options(const Robot& r) const {
  PathOptions o;
  if (r.spec.role == Role::Gcs) o.fixed_z = 1;
  return o;
}

std::optional<Tick> Simulator::travel(const Robot& r, const Voxel& a, const Voxel& b) const {
  if (a == b) return Tick{0};
  const auto& map = nav_map(r);
  if (!map.contains(a) || !map.contains(b)) return std::nullopt;
  auto p = astar_path(map, a, b, r.spec.speed, path_options(r));
  if (!p) return std::nullopt;
  return p->duration;
}

const DataStore& Simulator::gcs_store() const {
  for (const auto& r : robots_)
    if (r.spec.role == Role::Gcs) return r.store;
  throw std::logic_error("no GCS");
}

void Simulator::refresh_nav(Robot& r) {
  if (r.spec.role == Role::Explorer) return;
  const auto& dims = r.nav.dims();
  for (std::size_t i = 0; i < r.store.map.size(); ++i) {
    const Cell c = r.store.map.at_index(i);
    if (c != Cell::Unknown && r.nav.at_index(i) == Cell::Unknown) r.nav.observe(dims.voxel(i), c);
  }
}

void Simulator::note_status(FeatureId f, FeatureStatus s) {
  for (auto& feat : features_)
    if (feat.id == f && feat.status < s) feat.status = s;
}

bool Simulator::arrived_at(const Robot& r, const Voxel& goal) const {
  if (r.pose == goal) return true;
  if (chebyshev(r.pose, goal) > 1) return false;
  if (cfg_.world.truth.occupied(goal)) return true;
  for (const auto& o : robots_)
    if (o.spec.id != r.spec.id && o.status != RobotStatus::Failed && o.pose == goal) return true;
  return false;
}

void Simulator::set_goal(Robot& r, std::optional<Voxel> goal) {
  if (r.goal == goal) return;
  r.goal = goal;
  r.path.clear();
  r.path_next = 0;
  r.avoid_robots = false;
  r.blocked = 0;
}

std::optional<Voxel> Simulator::nearest_station(const Robot& r) const {
  std::optional<Voxel> best;
  for (const auto& s : cfg_.world.charging_stations) {
    const Voxel target = r.spec.role == Role::Gcs ? Voxel{s.x, s.y, 1} : s;
    if (!best || squared_distance(target, r.pose) < squared_distance(*best, r.pose) ||
        (squared_distance(target, r.pose) == squared_distance(*best, r.pose) && target < *best))
      best = target;
  }
  return best;
}

Tick Simulator::station_eta(Robot& r) {
  if (now_ - r.station_eta_at >= 10) {
    const auto st = nearest_station(r);
    Tick eta = 0;
    if (st) {
      const auto t = travel(r, r.pose, *st);
      eta = t ? *t : static_cast<Tick>(std::ceil(euclidean(r.pose, *st) * 2.0));
    }
    r.station_eta = eta;
    r.station_eta_at = now_;
  }
  return r.station_eta + (now_ - r.station_eta_at);
}

void Simulator::init() {
  const auto& truth = cfg_.world.truth;
  features_ = cfg_.world.features;
  for (auto& f : features_) f.status = FeatureStatus::Undiscovered;
  sensed_by_.assign(static_cast<std::size_t>(truth.dims().volume()), 0);
  for (const auto& b : cfg_.world.bboxes) next_box_id_ = std::max(next_box_id_, b.id + 1);

  for (const auto& spec : cfg_.robots) {
    Robot r;
    r.spec = spec;
    r.pose = spec.start;
    r.store = DataStore(spec.id, truth.dims(), truth.resolution());
    r.store.map.seed_shell();
    if (spec.role != Role::Explorer) {
      r.nav = LocalMap(spec.id, truth.dims(), truth.resolution());
      r.nav.seed_shell();
    }
    r.capacity = cfg_.energy.params.capacity * (spec.role == Role::Gcs ? cfg_.energy.gcs_capacity_scale : 1.0);
    r.energy = r.capacity;
    robots_.push_back(std::move(r));
  }
  std::vector<RobotId> gcs_ids, exp_ids, insp_ids;
  for (const auto& r : robots_) {
    if (r.spec.role == Role::Gcs) gcs_ids.push_back(r.spec.id);
    if (r.spec.role == Role::Explorer) exp_ids.push_back(r.spec.id);
    if (r.spec.role == Role::Inspector) insp_ids.push_back(r.spec.id);
  }
  for (auto id : gcs_ids) {
    GcsState g;
    g.home = robots_[static_cast<std::size_t>(id)].pose;
    gcs_[id] = g;
  }
  for (std::size_t k = 0; k < exp_ids.size(); ++k) {
    ExplorerState x;
    x.gcs = gcs_ids[k % gcs_ids.size()];
    gcs_[x.gcs].explorers.push_back(exp_ids[k]);
    explorers_[exp_ids[k]] = x;
  }
  for (auto id : insp_ids) inspectors_[id] = InspectorState{};

  if (cfg_.priors) {
    for (auto id : gcs_ids) {
      auto& store = robots_[static_cast<std::size_t>(id)].store;
      for (const auto& b : cfg_.world.bboxes) store.upsert(BBoxRecord{b, 0});
    }
  }
  log_.add(0, "sim", "start",
           {{"mode", to_string(cfg_.mode)}, {"seed", cfg_.seed}, {"budget", budget_}, {"priors", cfg_.priors},
            {"energy", cfg_.energy.enabled}});

  sense_all();
  // Everyone starts together: the GCS collects every start map.
  for (auto gid : gcs_ids) {
    auto& g = robots_[static_cast<std::size_t>(gid)];
    for (auto& r : robots_)
      if (r.spec.role != Role::Gcs) merge_into(g.store, r.store);
  }
  sync_gcs();

  // Initial box assignment, then the volume-proportional inspector split.
  auto& g0 = robots_[static_cast<std::size_t>(gcs_ids.front())];
  std::map<RobotId, BBoxId> initial;
  if (!cfg_.priors) {
    for (auto eid : exp_ids) {
      auto& e = robots_[static_cast<std::size_t>(eid)];
      if (auto b = no_prior_partition(g0, e.pose)) {
        initial[eid] = *b;
        auto rec = g0.store.bboxes.at(*b);
        rec.box.status = BBoxStatus::Assigned;
        rec.box.assigned_to = eid;
        ++rec.version;
        g0.store.upsert(rec);
      }
    }
  } else if (cfg_.mode == Mode::SleiPre) {
    std::vector<BBoxId> ids;
    for (const auto& b : cfg_.world.bboxes) ids.push_back(b.id);
    std::sort(ids.begin(), ids.end());
    const std::size_t n = exp_ids.size();
    const std::size_t per = (ids.size() + n - 1) / std::max<std::size_t>(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
      auto& x = explorers_[exp_ids[k]];
      for (std::size_t i = k * per; i < std::min(ids.size(), (k + 1) * per); ++i) x.pre_order.push_back(ids[i]);
      for (auto b : x.pre_order) {
        auto rec = g0.store.bboxes.at(b);
        rec.box.status = BBoxStatus::Assigned;
        rec.box.assigned_to = exp_ids[k];
        ++rec.version;
        g0.store.upsert(rec);
      }
      if (!x.pre_order.empty()) initial[exp_ids[k]] = x.pre_order.front();
    }
  } else {
    std::vector<BBox> boxes;
    for (const auto& [id, rec] : g0.store.bboxes) boxes.push_back(rec.box);
    std::map<RobotId, Voxel> poses;
    for (auto eid : exp_ids) poses[eid] = robots_[static_cast<std::size_t>(eid)].pose;
    initial = rolling_assign_initial(boxes, poses, g0.store.map);
    for (const auto& [eid, b] : initial) {
      auto rec = g0.store.bboxes.at(b);
      rec.box.status = BBoxStatus::Assigned;
      rec.box.assigned_to = eid;
      ++rec.version;
      g0.store.upsert(rec);
    }
  }
  sync_gcs();

  std::vector<std::int64_t> volumes;
  for (auto eid : exp_ids) {
    auto it = initial.find(eid);
    volumes.push_back(it == initial.end() ? 0 : g0.store.bboxes.at(it->second).box.volume());
  }
  const auto split = split_inspectors(volumes, static_cast<int>(insp_ids.size()));
  std::size_t next = 0;
  for (std::size_t k = 0; k < exp_ids.size(); ++k) {
    auto& x = explorers_[exp_ids[k]];
    for (int c = 0; c < split[k] && next < insp_ids.size(); ++c, ++next) {
      x.inspectors.push_back(insp_ids[next]);
      inspectors_[insp_ids[next]].explorer = exp_ids[k];
    }
    json ins = x.inspectors;
    log_.add(0, actor(exp_ids[k]), "subgroup", {{"inspectors", ins}});
  }

  for (auto eid : exp_ids) {
    auto& e = robots_[static_cast<std::size_t>(eid)];
    auto& x = explorers_[eid];
    auto& g = robots_[static_cast<std::size_t>(x.gcs)];
    exchange_in_place(g.store, e.store);
    if (auto it = initial.find(eid); it != initial.end()) {
      x.bbox = it->second;
      x.bbox_start = 0;
      e.store.map.track(g.store.bboxes.at(it->second).box);
      log_.add(0, actor(x.gcs), "assign", {{"explorer", eid}, {"bbox", it->second}});
    }
    schedule_next_gcs_meeting(g, e, x);
    exchange_in_place(g.store, e.store);
  }
  give_initial_plans();
  for (auto& r : robots_) {
    if (r.spec.role == Role::Inspector) {
      auto& ex = robots_[static_cast<std::size_t>(inspectors_[r.spec.id].explorer < 0 ? exp_ids.front()
                                                                                       : inspectors_[r.spec.id].explorer)];
      exchange_in_place(ex.store, r.store);
      explorers_[ex.spec.id].last_seen[r.spec.id] = r.pose;
    }
    refresh_nav(r);
  }
  record_tick();
}

void Simulator::sense_all() {
  const auto& truth = cfg_.world.truth;
  for (auto& r : robots_) {
    if (r.status == RobotStatus::Failed) continue;
    if (r.spec.role != Role::Explorer) {
      sense(truth, r.nav, r.pose, r.spec.sensor_range);
      continue;
    }
    const auto fresh = sense(truth, r.store.map, r.pose, r.spec.sensor_range);
    const std::uint32_t bit = 1u << (static_cast<unsigned>(r.spec.id) % 32u);
    for (const auto& v : fresh) {
      auto& mask = sensed_by_[truth.dims().index(v)];
      if (mask == 0) ++sensed_any_;
      else if ((mask & bit) == 0 && std::popcount(mask) == 1) ++sensed_multi_;
      mask |= bit;
    }
    for (auto fid : visible_features(truth, features_, r.pose, r.spec.sensor_range)) {
      if (r.store.features.count(fid)) continue;
      const auto& f = *std::find_if(features_.begin(), features_.end(), [&](const Feature& x) { return x.id == fid; });
      FeatureRecord rec{f.id, f.position, FeatureStatus::Fitted, kNoRobot, now_, f.priority, f.inspect_duration};
      r.store.upsert(rec);
      const bool first = f.status == FeatureStatus::Undiscovered;
      note_status(fid, FeatureStatus::Fitted);
      log_.add(now_, actor(r.spec.id), "fitted", {{"feature", fid}, {"first", first}});
    }
  }
}

void Simulator::move_robots() {
  std::set<Voxel> occupied;
  for (const auto& r : robots_)
    if (r.status != RobotStatus::Failed) occupied.insert(r.pose);
  for (auto& r : robots_) {
    r.moved = false;
    if (r.status == RobotStatus::Failed || r.status == RobotStatus::Charging) continue;
    move_one(r, occupied);
  }
}

void Simulator::move_one(Robot& r, std::set<Voxel>& occupied) {
  if (!r.goal || r.pose == *r.goal) {
    r.progress = 0;
    return;
  }
  if (arrived_at(r, *r.goal)) {
    r.progress = 0;
    return;
  }
  const auto& map = nav_map(r);
  auto plan_path = [&]() {
    Voxel target = *r.goal;
    // A robot parked on the goal, or a goal inside an obstacle: aim next to it.
    if (map.occupied(target))
      if (auto h = halt_cell(map, target); h && !occupied.count(*h) && (r.spec.role != Role::Gcs || h->z == 1))
        target = *h;
    if (occupied.count(target) || map.occupied(target)) {
      std::optional<Voxel> alt;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -1; dz <= 1; ++dz) {
            const Voxel c = target + Voxel{dx, dy, dz};
            if (!map.contains(c) || map.occupied(c) || occupied.count(c)) continue;
            if (r.spec.role == Role::Gcs && c.z != 1) continue;
            if (!alt || squared_distance(c, r.pose) < squared_distance(*alt, r.pose) ||
                (squared_distance(c, r.pose) == squared_distance(*alt, r.pose) && c < *alt))
              alt = c;
          }
      if (!alt) return false;
      target = *alt;
    }
    auto opts = path_options(r);
    std::vector<Voxel> others;
    if (r.avoid_robots) {
      for (const auto& v : occupied)
        if (v != r.pose && v != target) others.push_back(v);
      opts.extra_obstacles = others;
    }
    auto p = astar_path(map, r.pose, target, r.spec.speed, opts);
    if (!p && r.avoid_robots) {
      opts.extra_obstacles = {};
      p = astar_path(map, r.pose, target, r.spec.speed, opts);
    }
    if (!p) return false;
    r.path = std::move(p->cells);
    r.path_next = 1;
    return true;
  };
  if (r.path.empty() || r.path_next >= r.path.size()) {
    if (!plan_path()) {
      ++r.blocked;
      if (r.blocked == 1) log_.add(now_, actor(r.spec.id), "alarm", {{"reason", "no path"}, {"goal", to_string(*r.goal)}});
      return;
    }
  }
  Voxel next = r.path[r.path_next];
  if (map.occupied(next)) {
    if (!plan_path()) {
      ++r.blocked;
      return;
    }
    next = r.path[r.path_next];
  }
  r.moved = true;
  const auto per_tick = static_cast<std::int64_t>(std::llround(r.spec.speed / cfg_.world.truth.resolution() * kFaceCost));
  const auto cost = step_cost(next - r.pose);
  r.progress = std::min(r.progress + per_tick, cost + per_tick);
  if (r.progress < cost) return;
  if (occupied.count(next)) {
    ++r.blocked;
    r.progress = cost;
    if (r.blocked >= 3) {
      r.avoid_robots = true;
      r.path.clear();
    }
    return;
  }
  if (cfg_.world.truth.occupied(next)) {
    // Unseen obstacle: register it and try again next tick.
    if (r.spec.role == Role::Explorer)
      r.store.map.observe(next, Cell::Occupied);
    else
      r.nav.observe(next, Cell::Occupied);
    r.path.clear();
    return;
  }
  occupied.erase(r.pose);
  r.pose = next;
  occupied.insert(next);
  r.progress -= cost;
  ++r.path_next;
  r.blocked = 0;
}

void Simulator::energy_update() {
  if (!cfg_.energy.enabled) return;
  const auto& e = cfg_.energy.params;
  for (auto& r : robots_) {
    if (r.status == RobotStatus::Failed) continue;
    bool near_station = false;
    for (const auto& s : cfg_.world.charging_stations) {
      const Voxel st = r.spec.role == Role::Gcs ? Voxel{s.x, s.y, 1} : s;
      if (chebyshev(r.pose, st) <= 1) near_station = true;
    }
    if (r.status == RobotStatus::Charging || (r.docked && near_station)) {
      r.energy = std::min(r.capacity, r.energy + e.charge_per_tick);
      if (r.status == RobotStatus::Charging && r.energy >= r.capacity) {
        r.status = r.spec.role == Role::Explorer && !explorers_[r.spec.id].bbox ? RobotStatus::Standby
                                                                                 : RobotStatus::Active;
        r.seeking_charge = false;
        log_.add(now_, actor(r.spec.id), "recharge_done", {{"energy", r.energy}});
      }
      continue;
    }
    if (r.docked) continue;
    r.energy -= e.drain_per_tick;
    if (r.energy <= 0.0) {
      m_.energy_positive = false;
      r.status = RobotStatus::Failed;
      log_.add(now_, actor(r.spec.id), "depleted", json::object());
      continue;
    }
    const double reserve = e.min_level * (r.capacity / e.capacity);
    if (!r.seeking_charge) {
      const Tick eta = station_eta(r);
      if (r.energy - e.drain_per_tick * static_cast<double>(eta + 10) <= reserve) {
        r.seeking_charge = true;
        ++m_.recharges;
        log_.add(now_, actor(r.spec.id), "recharge_start", {{"energy", r.energy}, {"eta", eta}});
      }
    }
    if (r.seeking_charge && near_station) {
      r.status = RobotStatus::Charging;
      set_goal(r, std::nullopt);
    }
  }
}

void Simulator::fire_failures() {
  for (const auto& f : cfg_.failures) {
    if (f.tick != now_) continue;
    auto& r = robots_[static_cast<std::size_t>(f.robot)];
    if (r.status == RobotStatus::Failed) continue;
    r.status = RobotStatus::Failed;
    r.goal.reset();
    r.path.clear();
    log_.add(now_, actor(r.spec.id), "failure", json::object());
  }
  bool explorer_alive = false;
  for (const auto& r : robots_)
    if (r.spec.role == Role::Explorer && r.status != RobotStatus::Failed) explorer_alive = true;
  bool gcs_alive = false;
  for (const auto& r : robots_)
    if (r.spec.role == Role::Gcs && r.status != RobotStatus::Failed) gcs_alive = true;
  if ((!explorer_alive || !gcs_alive) && !done_) {
    done_ = true;
    log_.add(now_, "sim", "incomplete", {{"reason", explorer_alive ? "no surviving GCS" : "no surviving explorer"}});
  }
}

void Simulator::account_idle() {
  for (auto& r : robots_) {
    if (r.status == RobotStatus::Failed) continue;
    switch (r.activity) {
      case 1: ++r.idle.travel; break;
      case 2: ++r.idle.wait; break;
      case 3: ++r.idle.standby; break;
      default: break;
    }
  }
}

void Simulator::record_tick() {
  TickRow row;
  row.tick = now_;
  for (const auto& f : features_) ++row.feature_status[static_cast<std::size_t>(f.status)];
  for (const auto& r : robots_) {
    switch (r.status) {
      case RobotStatus::Active: ++row.active; break;
      case RobotStatus::Charging: ++row.charging; break;
      case RobotStatus::Standby: ++row.standby; break;
      case RobotStatus::Failed: ++row.failed; break;
    }
    if (r.status != RobotStatus::Failed && cfg_.energy.enabled)
      row.min_energy_fraction = std::min(row.min_energy_fraction, r.energy / r.capacity);
  }
  m_.min_energy_fraction = std::min(m_.min_energy_fraction, row.min_energy_fraction);
  m_.ticks.push_back(row);
}

void Simulator::check_finish() {
  if (done_) return;
  bool all_collected = std::all_of(features_.begin(), features_.end(),
                                   [](const Feature& f) { return f.status == FeatureStatus::Collected; });
  const auto& store = gcs_store();
  bool boxes_done = std::all_of(store.bboxes.begin(), store.bboxes.end(),
                                [](const auto& kv) { return kv.second.box.status == BBoxStatus::Complete; });
  if (!cfg_.priors) boxes_done = boxes_done && partition_exhausted_;
  if (all_collected && boxes_done) {
    done_ = true;
    finished_ = true;
    finish_tick_ = now_;
    log_.add(now_, "sim", "finish", {{"tick", now_}});
    return;
  }
  if (now_ >= budget_) {
    done_ = true;
    log_.add(now_, "sim", "incomplete", {{"reason", "tick budget exhausted"}});
  }
}

bool Simulator::step() {
  if (done_) return false;
  ++now_;
  exchanged_this_tick_.clear();
  decide_goals();
  move_robots();
  sense_all();
  run_meetings();
  spontaneous_meetings();
  mismatch();
  energy_update();
  fire_failures();
  if (!done_) plan_all();
  sync_gcs();
  account_idle();
  record_tick();
  check_finish();
  return !done_;
}

RunResult Simulator::run() {
  while (step()) {
  }
  return {metrics(), log_};
}

Metrics Simulator::metrics() const {
  Metrics m = m_;
  m.finished = finished_;
  m.finish_tick = finished_ ? finish_tick_ : now_;
  m.features_total = static_cast<int>(features_.size());
  m.features_collected = static_cast<int>(
      std::count_if(features_.begin(), features_.end(), [](const Feature& f) { return f.status == FeatureStatus::Collected; }));
  m.finish_rate = m.features_total == 0 ? (finished_ ? 1.0 : 0.0)
                                        : static_cast<double>(m.features_collected) / m.features_total;
  m.total_idle = 0;
  for (const auto& r : robots_) {
    m.idle[r.spec.id] = r.idle;
    m.total_idle += r.idle.travel + r.idle.wait;
  }
  const int total_meetings = m.gcs_explorer_meetings + m.explorer_inspector_meetings + m.spontaneous_meetings;
  m.bytes_per_meeting = total_meetings > 0 ? static_cast<double>(m.bytes_total) / total_meetings : 0.0;
  m.overlap_rate = sensed_any_ > 0 ? static_cast<double>(sensed_multi_) / static_cast<double>(sensed_any_) : 0.0;
  m.bboxes_total = static_cast<int>(gcs_store().bboxes.size());
  return m;
}

RunResult run_simulation(const SimConfig& cfg) {
  Simulator sim(cfg);
  return sim.run();
}

}  // namespace slei

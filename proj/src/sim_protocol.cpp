#include <algorithm>
#include <cmath>

#include "slei/sim.hpp"

namespace slei {

using nlohmann::json;

namespace {

constexpr int kDockTarget = -1;

bool is_dock(const PlanStep& s) { return s.action == ActionKind::Charge && s.target == kDockTarget; }

json voxel_json(const Voxel& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

// ---------------------------------------------------------------- goals

void Simulator::decide_goals() {
  // A GCS meeting point found to lie inside an obstacle moves to the nearest
  // free spot on the ground plane.
  for (auto& [eid, x] : explorers_) {
    if (!x.gcs_meeting) continue;
    auto& a = *x.gcs_meeting;
    const auto& er = robots_[static_cast<std::size_t>(eid)];
    auto& gr = robots_[static_cast<std::size_t>(a.event.peer)];
    if (!er.store.map.occupied(a.event.location) && !gr.nav.occupied(a.event.location)) continue;
    auto moved = nudge_to_free(er.store.map, a.event.location);
    if (moved && gr.nav.occupied(*moved)) moved = nudge_to_free(gr.nav, *moved);
    if (!moved) continue;
    for (auto& v : gcs_[a.event.peer].route)
      if (v.explorer == eid && v.location == a.event.location) v.location = *moved;
    if (a.meeting_row >= 0) m_.meetings[static_cast<std::size_t>(a.meeting_row)].location = *moved;
    log_.add(now_, actor(a.event.peer), "relocate",
             {{"explorer", eid}, {"from", voxel_json(a.event.location)}, {"to", voxel_json(*moved)}});
    a.event.location = *moved;
    a.arrived = kNoTick;
    if (!gcs_[a.event.peer].route.empty() && gcs_[a.event.peer].route.front().explorer == eid)
      gcs_[a.event.peer].arrived = kNoTick;
  }
  for (auto& r : robots_) {
    r.activity = 0;
    if (r.status == RobotStatus::Failed || r.status == RobotStatus::Charging) continue;
    if (r.seeking_charge) {
      r.docked = false;
      set_goal(r, nearest_station(r));
      continue;
    }
    switch (r.spec.role) {
      case Role::Explorer: explorer_goal(r, explorers_[r.spec.id]); break;
      case Role::Inspector: inspector_goal(r, inspectors_[r.spec.id]); break;
      case Role::Gcs: gcs_goal(r, gcs_[r.spec.id]); break;
    }
  }
}

void Simulator::explorer_goal(Robot& r, ExplorerState& x) {
  if (!x.inspector_meetings.empty()) {
    auto& a = x.inspector_meetings.front();
    set_goal(r, a.event.location);
    if (arrived_at(r, a.event.location)) {
      if (a.arrived == kNoTick) a.arrived = now_;
      r.activity = 2;
    } else {
      r.activity = 1;
    }
    return;
  }
  if (x.gcs_meeting) {
    auto& g = *x.gcs_meeting;
    while (!r.plan.steps.empty() && r.plan.steps.front().action == ActionKind::Explore) {
      const auto& wp = r.plan.steps.front().waypoint;
      if (!arrived_at(r, wp)) break;
      r.plan.steps.erase(r.plan.steps.begin());
      x.need_replan = true;
    }
    if (!r.plan.steps.empty() && r.plan.steps.front().action == ActionKind::Explore) {
      set_goal(r, r.plan.steps.front().waypoint);
      return;
    }
    set_goal(r, g.event.location);
    if (arrived_at(r, g.event.location)) {
      if (g.arrived == kNoTick) {
        g.arrived = now_;
        if (g.meeting_row >= 0) m_.meetings[static_cast<std::size_t>(g.meeting_row)].explorer_arrival = now_;
      }
      r.activity = x.bbox ? 2 : 3;
      if (cfg_.protocol.max_wait && now_ > g.event.tick + *cfg_.protocol.max_wait) {
        log_.add(now_, actor(r.spec.id), "wait_abandoned", {{"gcs", g.event.peer}});
        x.gcs_meeting.reset();
      }
    } else {
      r.activity = x.bbox ? 1 : 3;
    }
    return;
  }
  set_goal(r, std::nullopt);
  r.activity = x.bbox ? 2 : 3;
}

void Simulator::inspector_goal(Robot& r, InspectorState& s) {
  while (!r.plan.steps.empty()) {
    auto& step = r.plan.steps.front();
    set_goal(r, step.waypoint);
    if (!arrived_at(r, step.waypoint)) {
      r.activity = step.action == ActionKind::Inspect || step.action == ActionKind::Move ? 1 : 0;
      return;
    }
    // a result heard from elsewhere skips the work but keeps the published route
    if (step.action == ActionKind::Inspect && r.store.results.count(step.target)) {
      r.plan.steps.erase(r.plan.steps.begin());
      s.inspect_left = -1;
      continue;
    }
    switch (step.action) {
      case ActionKind::Inspect:
        inspect_progress(r, s);
        return;
      case ActionKind::Charge:
        if (is_dock(step)) {
          if (!r.docked) log_.add(now_, actor(r.spec.id), "dock", {{"station", voxel_json(step.waypoint)}});
          r.docked = true;
          r.activity = 2;
          return;
        }
        r.plan.steps.erase(r.plan.steps.begin());
        if (cfg_.energy.enabled && r.energy < r.capacity) {
          r.status = RobotStatus::Charging;
          ++m_.recharges;
          log_.add(now_, actor(r.spec.id), "recharge_start", {{"energy", r.energy}, {"planned", true}});
        }
        return;
      default:
        r.plan.steps.erase(r.plan.steps.begin());
        continue;
    }
  }
  set_goal(r, std::nullopt);
  r.activity = 2;
}

void Simulator::inspect_progress(Robot& r, InspectorState& s) {
  auto& step = r.plan.steps.front();
  if (s.inspect_left < 0) s.inspect_left = step.duration;
  --s.inspect_left;
  if (s.inspect_left > 0) return;
  const FeatureId f = step.target;
  r.store.add_result(InspectionResult{f, r.spec.id, now_, 64});
  auto it = r.store.features.find(f);
  if (it != r.store.features.end() && it->second.status < FeatureStatus::Inspected) {
    auto rec = it->second;
    rec.status = FeatureStatus::Inspected;
    rec.stamp = now_;
    r.store.upsert(rec);
  }
  note_status(f, FeatureStatus::Inspected);
  log_.add(now_, actor(r.spec.id), "inspected", {{"feature", f}});
  r.plan.steps.erase(r.plan.steps.begin());
  s.inspect_left = -1;
}

void Simulator::gcs_goal(Robot& r, GcsState& g) {
  if (cfg_.mode == Mode::SleiFix) {
    set_goal(r, g.home);
    if (!g.route.empty()) {
      if (g.arrived == kNoTick && arrived_at(r, g.home)) g.arrived = now_;
      if (r.pose == g.home || arrived_at(r, g.home)) r.activity = 2;
    }
    return;
  }
  if (g.route.empty()) {
    set_goal(r, std::nullopt);
    return;
  }
  const auto& v = g.route.front();
  set_goal(r, v.location);
  if (arrived_at(r, v.location)) {
    if (g.arrived == kNoTick) g.arrived = now_;
    r.activity = 2;
  }
}

// ------------------------------------------------------------- meetings

std::int64_t Simulator::exchange_logged(Robot& a, Robot& b, const char* kind) {
  std::vector<FeatureId> to_a, to_b;
  for (const auto& [f, res] : b.store.results)
    if (!a.store.results.count(f)) to_a.push_back(f);
  for (const auto& [f, res] : a.store.results)
    if (!b.store.results.count(f)) to_b.push_back(f);
  const LinkSpec link{std::min(a.spec.comm_range, b.spec.comm_range), true};
  const auto bytes = checked_exchange(cfg_.world.truth, a.store, a.pose, b.store, b.pose, link);
  m_.bytes_total += bytes;
  exchanged_this_tick_.insert(a.spec.id);
  exchanged_this_tick_.insert(b.spec.id);
  refresh_nav(a);
  refresh_nav(b);
  json payload{{"a", a.spec.id}, {"b", b.spec.id}, {"kind", kind}, {"bytes", bytes}};
  if (!to_a.empty()) payload["results_to_a"] = to_a;
  if (!to_b.empty()) payload["results_to_b"] = to_b;
  log_.add(now_, actor(a.spec.id), "exchange", payload);
  if (a.spec.role == Role::Gcs) collect(a);
  if (b.spec.role == Role::Gcs) collect(b);
  return bytes;
}

void Simulator::collect(Robot& gcs) {
  for (const auto& [f, res] : gcs.store.results) {
    auto it = gcs.store.features.find(f);
    FeatureRecord rec;
    if (it != gcs.store.features.end()) {
      rec = it->second;
    } else {
      const auto& truth = *std::find_if(features_.begin(), features_.end(), [&](const Feature& x) { return x.id == f; });
      rec = FeatureRecord{f, truth.position, FeatureStatus::Inspected, res.inspector, now_, truth.priority,
                          truth.inspect_duration};
    }
    if (rec.status < FeatureStatus::Collected) {
      rec.status = FeatureStatus::Collected;
      rec.stamp = now_;
      gcs.store.upsert(rec);
    }
    note_status(f, FeatureStatus::Collected);
    if (collected_.insert(f).second)
      log_.add(now_, actor(gcs.spec.id), "collected", {{"feature", f}, {"inspector", res.inspector}});
  }
}

void Simulator::sync_gcs() {
  std::vector<Robot*> units;
  for (auto& r : robots_)
    if (r.spec.role == Role::Gcs && r.status != RobotStatus::Failed) units.push_back(&r);
  if (units.size() > 1) {
    for (std::size_t i = 1; i < units.size(); ++i) merge_into(units[0]->store, units[i]->store);
    for (std::size_t i = 1; i < units.size(); ++i) merge_into(units[i]->store, units[0]->store);
  }
  for (auto* g : units) {
    collect(*g);
    refresh_nav(*g);
  }
}

void Simulator::run_meetings() {
  const auto& truth = cfg_.world.truth;
  for (auto& [gid, g] : gcs_) {
    auto& gr = robots_[static_cast<std::size_t>(gid)];
    if (gr.status == RobotStatus::Failed || g.route.empty()) continue;
    // visits sharing the front's location are served in whatever order explorers turn up
    const Voxel here = g.route.front().location;
    std::vector<RobotId> due;
    for (const auto& v : g.route)
      if (v.location == here) due.push_back(v.explorer);
    for (const RobotId eid : due) {
      auto& er = robots_[static_cast<std::size_t>(eid)];
      auto& x = explorers_[eid];
      if (er.status == RobotStatus::Failed || !x.gcs_meeting || x.gcs_meeting->event.peer != gid) continue;
      if (exchanged_this_tick_.count(gid) || exchanged_this_tick_.count(eid)) continue;
      const bool both_there = x.gcs_meeting->arrived != kNoTick && g.arrived != kNoTick && has_news(gr, er, x);
      if (!both_there && now_ < x.gcs_meeting->event.tick - cfg_.protocol.arrival_margin) continue;
      const LinkSpec link{std::min(gr.spec.comm_range, er.spec.comm_range), true};
      if (!link_available(truth, gr.pose, er.pose, link)) continue;
      gcs_meeting(gr, er);
    }
  }
  for (auto& [eid, x] : explorers_) {
    auto& er = robots_[static_cast<std::size_t>(eid)];
    if (er.status == RobotStatus::Failed || x.inspector_meetings.empty()) continue;
    const RobotId jid = x.inspector_meetings.front().event.peer;
    auto& jr = robots_[static_cast<std::size_t>(jid)];
    if (jr.status == RobotStatus::Failed) continue;
    if (exchanged_this_tick_.count(eid) || exchanged_this_tick_.count(jid)) continue;
    const LinkSpec link{std::min(er.spec.comm_range, jr.spec.comm_range), true};
    if (!link_available(truth, er.pose, jr.pose, link)) continue;
    inspector_meeting(er, x, jr);
  }
}

void Simulator::release_reservations(ExplorerState& x, const Appointment& a) {
  for (auto f : a.features) {
    auto it = x.reserved.find(f);
    if (it != x.reserved.end() && it->second == a.event.peer) x.reserved.erase(it);
  }
}

void Simulator::drop_inspector_meetings(RobotId explorer, ExplorerState& x, const char* reason) {
  if (x.inspector_meetings.empty()) return;
  json peers = json::array();
  for (const auto& a : x.inspector_meetings) {
    release_reservations(x, a);
    peers.push_back(a.event.peer);
  }
  x.inspector_meetings.clear();
  x.need_replan = true;
  log_.add(now_, actor(explorer), "drop_meetings", {{"reason", reason}, {"peers", peers}});
}

bool Simulator::gcs_meeting(Robot& gcs, Robot& exp) {
  auto& x = explorers_[exp.spec.id];
  auto& g = gcs_[gcs.spec.id];
  const auto bytes = exchange_logged(gcs, exp, "scheduled");
  const auto& appt = *x.gcs_meeting;
  if (appt.meeting_row >= 0) {
    auto& row = m_.meetings[static_cast<std::size_t>(appt.meeting_row)];
    row.met = now_;
    row.status = "met";
    if (row.gcs_arrival == kNoTick) row.gcs_arrival = g.arrived == kNoTick ? now_ : g.arrived;
    if (row.explorer_arrival == kNoTick) row.explorer_arrival = appt.arrived == kNoTick ? now_ : appt.arrived;
    row.gcs_idle = std::max<Tick>(0, now_ - std::max(row.gcs_arrival, Tick{0}));
  }
  ++m_.gcs_explorer_meetings;
  log_.add(now_, actor(gcs.spec.id), "meeting",
           {{"with", exp.spec.id}, {"kind", "gcs"}, {"planned", appt.event.tick}, {"bytes", bytes}});
  for (auto it = g.route.begin(); it != g.route.end(); ++it)
    if (it->explorer == exp.spec.id) {
      g.route.erase(it);
      break;
    }
  g.arrived = kNoTick;
  x.gcs_meeting.reset();
  x.unknown_at_meeting = exp.store.map.unknown_count();
  drop_inspector_meetings(exp.spec.id, x, "gcs meeting");
  if (suspects_.erase(exp.spec.id)) log_.add(now_, actor(gcs.spec.id), "reinstate", {{"explorer", exp.spec.id}});

  if (x.bbox) {
    auto it = gcs.store.bboxes.find(*x.bbox);
    if (it == gcs.store.bboxes.end() || it->second.box.assigned_to != exp.spec.id ||
        it->second.box.status != BBoxStatus::Assigned) {
      x.bbox.reset();
    } else if (bbox_complete(gcs, exp, *x.bbox)) {
      auto rec = it->second;
      rec.box.status = BBoxStatus::Complete;
      ++rec.version;
      gcs.store.upsert(rec);
      log_.add(now_, actor(gcs.spec.id), "bbox_complete", {{"bbox", *x.bbox}, {"explorer", exp.spec.id}});
      x.bbox.reset();
    }
  }
  sync_gcs();
  if (!x.bbox) assign_next_bbox(gcs, exp, x);
  else adopt_orphans(exp, x);
  schedule_next_gcs_meeting(gcs, exp, x);
  m_.bytes_total += exchange_in_place(gcs.store, exp.store);
  exp.plan = LocalPlan{};
  x.need_replan = true;
  return true;
}

bool Simulator::has_news(const Robot& gcs, const Robot& exp, const ExplorerState& x) const {
  if (exp.store.map.unknown_count() != x.unknown_at_meeting) return true;
  for (const auto& [f, res] : exp.store.results)
    if (!gcs.store.results.count(f)) return true;
  for (const auto& [f, rec] : exp.store.features) {
    auto it = gcs.store.features.find(f);
    if (it == gcs.store.features.end() || it->second.status < rec.status) return true;
  }
  return false;
}

bool Simulator::bbox_complete(const Robot& gcs, const Robot& exp, BBoxId id) {
  const auto& box = gcs.store.bboxes.at(id).box;
  for (const auto& [f, rec] : gcs.store.features)
    if (box.contains(rec.position) && !gcs.store.results.count(f)) return false;
  return reachable_targets(exp.store.map, box, exp.pose).empty();
}

bool Simulator::inspector_meeting(Robot& exp, ExplorerState& x, Robot& insp) {
  auto appt = x.inspector_meetings.front();
  x.inspector_meetings.pop_front();
  const auto bytes = exchange_logged(exp, insp, "scheduled");
  std::vector<FeatureId> handed;
  std::vector<PlanStep> steps;
  for (const auto& step : appt.handover) {
    auto it = exp.store.features.find(step.target);
    if (it == exp.store.features.end() || exp.store.results.count(step.target)) continue;
    if (it->second.status > FeatureStatus::Assigned) continue;
    auto rec = it->second;
    rec.status = FeatureStatus::Assigned;
    rec.assignee = insp.spec.id;
    rec.stamp = now_;
    exp.store.upsert(rec);
    insp.store.upsert(exp.store.features.at(step.target));
    note_status(step.target, FeatureStatus::Assigned);
    handed.push_back(step.target);
    steps.push_back(step);
  }
  release_reservations(x, appt);
  if (!steps.empty()) {
    append_inspector_steps(insp, steps);
    log_.add(now_, actor(exp.spec.id), "handover", {{"inspector", insp.spec.id}, {"features", handed}});
  }
  m_.bytes_total += exchange_in_place(exp.store, insp.store);
  x.misses[insp.spec.id] = 0;
  x.last_seen[insp.spec.id] = insp.pose;
  ++m_.explorer_inspector_meetings;
  log_.add(now_, actor(exp.spec.id), "meeting",
           {{"with", insp.spec.id}, {"kind", "inspector"}, {"planned", appt.event.tick}, {"bytes", bytes}});
  x.need_replan = true;
  return true;
}

void Simulator::spontaneous_meetings() {
  const auto& truth = cfg_.world.truth;
  std::set<std::pair<RobotId, RobotId>> linked;
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    auto& a = robots_[i];
    if (a.status == RobotStatus::Failed) continue;
    for (std::size_t j = i + 1; j < robots_.size(); ++j) {
      auto& b = robots_[j];
      if (b.status == RobotStatus::Failed) continue;
      const LinkSpec link{std::min(a.spec.comm_range, b.spec.comm_range), true};
      if (!link_available(truth, a.pose, b.pose, link)) continue;
      const std::pair<RobotId, RobotId> key{a.spec.id, b.spec.id};
      linked.insert(key);
      if (linked_prev_.count(key)) continue;
      if (exchanged_this_tick_.count(a.spec.id) || exchanged_this_tick_.count(b.spec.id)) continue;
      // A GCS finding a suspected explorer alive resumes the protocol with it.
      Robot* gcs = a.spec.role == Role::Gcs ? &a : b.spec.role == Role::Gcs ? &b : nullptr;
      Robot* exp = a.spec.role == Role::Explorer ? &a : b.spec.role == Role::Explorer ? &b : nullptr;
      if (gcs && exp && suspects_.count(exp->spec.id) && explorers_[exp->spec.id].gcs_meeting &&
          explorers_[exp->spec.id].gcs_meeting->event.peer == gcs->spec.id) {
        gcs_meeting(*gcs, *exp);
        continue;
      }
      exchange_logged(a, b, "spontaneous");
      ++m_.spontaneous_meetings;
      Robot* insp = a.spec.role == Role::Inspector ? &a : b.spec.role == Role::Inspector ? &b : nullptr;
      if (exp && insp) {
        auto& x = explorers_[exp->spec.id];
        x.last_seen[insp->spec.id] = insp->pose;
        if (x.declared_failed.erase(insp->spec.id)) {
          if (inspectors_[insp->spec.id].explorer == exp->spec.id) x.inspectors.push_back(insp->spec.id);
          std::sort(x.inspectors.begin(), x.inspectors.end());
          x.misses[insp->spec.id] = 0;
          log_.add(now_, actor(exp->spec.id), "reinstate", {{"inspector", insp->spec.id}});
        }
      }
    }
  }
  linked_prev_ = std::move(linked);
}

}  // namespace slei

namespace slei {

// ------------------------------------------------------------- mismatch

void Simulator::mismatch() {
  const Tick delta = cfg_.protocol.delta;
  for (auto& [gid, g] : gcs_) {
    auto& gr = robots_[static_cast<std::size_t>(gid)];
    if (gr.status == RobotStatus::Failed || g.route.empty() || g.arrived == kNoTick) continue;
    if (cfg_.mode != Mode::SleiFix && !arrived_at(gr, g.route.front().location)) continue;
    const GcsVisit v = g.route.front();
    if (now_ <= std::max(v.tick, g.arrived) + delta) continue;
    auto& x = explorers_[v.explorer];
    g.route.erase(g.route.begin());
    g.arrived = kNoTick;
    if (x.gcs_meeting && x.gcs_meeting->meeting_row >= 0) {
      auto& row = m_.meetings[static_cast<std::size_t>(x.gcs_meeting->meeting_row)];
      row.status = "missed";
      if (row.gcs_arrival == kNoTick) row.gcs_arrival = now_;
    }
    log_.add(now_, actor(gid), "missed", {{"explorer", v.explorer}, {"planned", v.tick}});
    if (suspects_.count(v.explorer)) continue;  // the retry failed too
    recover_explorer_failure(v.explorer, gid);
    // One retry at the same place in case the explorer is merely late.
    if (x.gcs_meeting && x.gcs_meeting->event.peer == gid) {
      const auto back = travel(gr, gr.pose, x.gcs_meeting->event.location);
      g.route.push_back(GcsVisit{v.explorer, x.gcs_meeting->event.location, now_ + (back ? *back : 0)});
      x.gcs_meeting->event.attempt += 1;
    }
  }

  for (auto& [eid, x] : explorers_) {
    auto& er = robots_[static_cast<std::size_t>(eid)];
    if (er.status == RobotStatus::Failed || x.inspector_meetings.empty()) continue;
    if (x.gcs_meeting && now_ >= x.gcs_meeting->event.tick - cfg_.protocol.arrival_margin) {
      drop_inspector_meetings(eid, x, "gcs deadline");
      continue;
    }
    auto& a = x.inspector_meetings.front();
    if (a.arrived == kNoTick || now_ <= std::max(a.arrived, a.event.tick) + delta) continue;
    const RobotId j = a.event.peer;
    const Appointment missed = a;
    x.inspector_meetings.pop_front();
    const int misses = ++x.misses[j];
    log_.add(now_, actor(eid), "missed", {{"inspector", j}, {"planned", missed.event.tick}, {"misses", misses}});
    x.need_replan = true;
    if (missed.event.attempt == 0) {
      // Retry where the inspector's last known plan ends.
      auto pit = er.store.plans.find(j);
      const Voxel seen = x.last_seen.count(j) ? x.last_seen.at(j) : robots_[static_cast<std::size_t>(j)].spec.start;
      Appointment retry = missed;
      retry.event.location = pit == er.store.plans.end() ? seen : pit->second.end_position(seen);
      retry.event.tick = std::max(now_, pit == er.store.plans.end() ? now_ : pit->second.end_tick());
      retry.event.attempt += 1;
      retry.arrived = kNoTick;
      if (travel(er, er.pose, retry.event.location)) {
        x.inspector_meetings.push_front(retry);
        log_.add(now_, actor(eid), "retry", {{"inspector", j}, {"location", voxel_json(retry.event.location)},
                                             {"tick", retry.event.tick}});
        continue;
      }
    }
    release_reservations(x, missed);
    x.declared_failed[j] = now_;
    std::erase(x.inspectors, j);
    log_.add(now_, actor(eid), "inspector_failed", {{"inspector", j}});
  }
}

void Simulator::recover_explorer_failure(RobotId failed, RobotId gid) {
  suspects_.insert(failed);
  auto& g = gcs_[gid];
  std::erase_if(g.route, [&](const GcsVisit& v) { return v.explorer == failed; });
  auto& gr = robots_[static_cast<std::size_t>(gid)];
  json boxes = json::array();
  for (auto& [id, rec] : gr.store.bboxes) {
    if (rec.box.assigned_to != failed || rec.box.status != BBoxStatus::Assigned) continue;
    auto next = rec;
    next.box.status = BBoxStatus::Unassigned;
    next.box.assigned_to = kNoRobot;
    ++next.version;
    rec = next;
    priority_boxes_.insert(id);
    boxes.push_back(id);
  }
  auto& x = explorers_[failed];
  x.pre_order.clear();
  for (auto j : x.inspectors) {
    orphan_inspectors_.push_back(j);
    inspectors_[j].explorer = kNoRobot;
  }
  json orphans = x.inspectors;
  x.inspectors.clear();
  log_.add(now_, actor(gid), "explorer_suspected", {{"explorer", failed}, {"bboxes", boxes}, {"inspectors", orphans}});
}

// ------------------------------------------------------------- planning

void Simulator::plan_all() {
  for (auto& [eid, x] : explorers_) {
    auto& r = robots_[static_cast<std::size_t>(eid)];
    if (r.status == RobotStatus::Failed) continue;
    if (!x.declared_failed.empty()) reinstate_heard(r, x);
    if (r.status == RobotStatus::Charging || r.seeking_charge) continue;
    if (!x.gcs_meeting) continue;
    if (x.inspector_meetings.empty() && now_ - x.last_soei >= cfg_.protocol.soei_period && !x.inspectors.empty()) {
      x.last_soei = now_;
      explorer_soei(r, x);
    }
    if (!x.inspector_meetings.empty() || !x.bbox) continue;
    if (x.need_replan || now_ - x.last_replan >= cfg_.protocol.replan_period) explorer_replan(r, x);
  }
}

void Simulator::explorer_replan(Robot& r, ExplorerState& x) {
  x.last_replan = now_;
  x.need_replan = false;
  ++m_.replans;
  auto bit = r.store.bboxes.find(*x.bbox);
  if (bit == r.store.bboxes.end()) return;
  const auto& appt = *x.gcs_meeting;
  const auto targets = reachable_targets(r.store.map, bit->second.box, r.pose);
  const Meeting meet{appt.event.location, appt.event.tick - cfg_.protocol.arrival_margin, appt.event.peer};
  FF3EOptions opts;
  opts.k_cap = cfg_.protocol.k_cap;
  auto res = ff3e(r.spec.id, r.pose, now_, targets, meet, r.spec.speed, r.store.map, opts);
  r.plan = res.plan;
  publish_plan(r);
}

std::vector<FeatureTask> Simulator::fplus(const Robot& r, const ExplorerState& x) const {
  std::vector<FeatureTask> out;
  std::vector<std::int64_t> field;
  for (const auto& [f, rec] : r.store.features) {
    if (r.store.results.count(f) || x.reserved.count(f)) continue;
    const bool open = rec.status == FeatureStatus::Fitted ||
                      (rec.status == FeatureStatus::Assigned && x.declared_failed.count(rec.assignee));
    if (!open) continue;
    bool foreign = false;
    for (const auto& [id, b] : r.store.bboxes)
      if (b.box.status == BBoxStatus::Assigned && b.box.assigned_to != r.spec.id && b.box.contains(rec.position) &&
          !(x.bbox && *x.bbox == id))
        foreign = true;
    if (foreign) {
      bool own = false;
      if (x.bbox) {
        auto it = r.store.bboxes.find(*x.bbox);
        own = it != r.store.bboxes.end() && it->second.box.contains(rec.position);
      }
      if (!own) continue;
    }
    if (field.empty()) field = distance_field(r.store.map, r.pose);
    const auto& dims = r.store.map.dims();
    // inspect from the closest reachable cell so every plan names a free standoff
    std::optional<Voxel> standoff;
    int best = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Voxel n{rec.position.x + dx, rec.position.y + dy, rec.position.z + dz};
          if (!dims.contains(n) || field[dims.index(n)] < 0 || r.store.map.occupied(n)) continue;
          const int d = dx * dx + dy * dy + dz * dz;
          if (!standoff || d < best) {
            standoff = n;
            best = d;
          }
        }
    if (!standoff) continue;
    out.push_back(FeatureTask{f, *standoff, rec.inspect_duration, rec.priority});
  }
  return out;
}

int Simulator::pending_results(const Robot& r, const ExplorerState& x, RobotId insp) const {
  (void)x;
  auto pit = r.store.plans.find(insp);
  int n = 0;
  for (const auto& [f, rec] : r.store.features) {
    if (rec.status != FeatureStatus::Assigned || rec.assignee != insp || r.store.results.count(f)) continue;
    if (pit == r.store.plans.end()) continue;
    for (const auto& s : pit->second.steps)
      if (s.action == ActionKind::Inspect && s.target == f && s.arrival + s.duration <= now_) ++n;
  }
  return n;
}

void Simulator::explorer_soei(Robot& r, ExplorerState& x) {
  SoeiInput in;
  in.explorer = r.spec.id;
  in.pose = r.pose;
  in.now = now_;
  in.speed = r.spec.speed;
  in.map = &r.store.map;
  in.features = fplus(r, x);
  double comm = r.spec.comm_range;
  bool any_pending = false;
  for (auto j : x.inspectors) {
    const auto& jr = robots_[static_cast<std::size_t>(j)];
    InspectorView v;
    v.id = j;
    v.pose = x.last_seen.count(j) ? x.last_seen.at(j) : jr.spec.start;
    if (auto it = r.store.plans.find(j); it != r.store.plans.end()) v.plan = it->second;
    v.pending_results = pending_results(r, x, j);
    any_pending = any_pending || v.pending_results > 0;
    in.inspector_speed = jr.spec.speed;
    comm = std::min(comm, jr.spec.comm_range);
    in.inspectors.push_back(std::move(v));
  }
  if (in.features.empty() && !any_pending) return;
  in.link = LinkSpec{comm, true};
  const auto& g = *x.gcs_meeting;
  in.deadline = Meeting{g.event.location, g.event.tick - cfg_.protocol.arrival_margin, g.event.peer};
  SoeiParams params;
  params.n_samples = cfg_.protocol.n_samples;
  params.ga = cfg_.protocol.ga;
  params.defer_feature_cost = cfg_.protocol.defer_feature_cost;
  params.defer_result_cost = cfg_.protocol.defer_result_cost;
  const auto plan = soei(std::move(in), params, ga_rng_);

  ++m_.soei_runs;
  SoeiRow row;
  row.tick = now_;
  row.explorer = r.spec.id;
  row.chosen = plan.chosen;
  row.tau = plan.idle();
  row.tau_plus = plan.idle_plus;
  row.tau_minus = plan.idle_minus;
  for (const auto& [j, fs] : plan.allocation) row.allocated[j] = static_cast<int>(fs.size());
  row.used_ga = plan.used_ga;
  m_.soei.push_back(row);
  json alloc = json::object();
  for (const auto& [j, fs] : plan.allocation) alloc[std::to_string(j)] = fs;
  log_.add(now_, actor(r.spec.id), "soei",
           {{"chosen", plan.chosen}, {"tau_plus", plan.idle_plus}, {"tau_minus", plan.idle_minus},
            {"allocation", alloc}, {"ga", plan.used_ga}});
  if (plan.chosen.empty()) return;

  for (const auto& ev : plan.meetings) {
    Appointment a;
    a.event = ev;
    a.event.status = MeetingStatus::Confirmed;
    if (auto it = plan.appended.find(ev.peer); it != plan.appended.end()) a.handover = it->second;
    if (auto it = plan.allocation.find(ev.peer); it != plan.allocation.end()) a.features = it->second;
    for (auto f : a.features) x.reserved[f] = ev.peer;
    x.inspector_meetings.push_back(std::move(a));
  }
  r.plan = LocalPlan{};
  r.plan.owner = r.spec.id;
  for (const auto& ev : plan.meetings) r.plan.steps.push_back(PlanStep{ev.location, ev.tick, ActionKind::Meet, ev.peer, 0});
  publish_plan(r);
}

void Simulator::publish_plan(Robot& r) {
  r.plan.owner = r.spec.id;
  r.plan.issued = now_;
  r.store.plans[r.spec.id] = r.plan;
}

}  // namespace slei

namespace slei {

// ----------------------------------------------------------- scheduling

namespace {

bool work_remains(const DataStore& gcs, const std::vector<Feature>& features, bool priors, bool exhausted) {
  for (const auto& [id, rec] : gcs.bboxes)
    if (rec.box.status != BBoxStatus::Complete) return true;
  for (const auto& f : features)
    if (f.status >= FeatureStatus::Fitted && f.status < FeatureStatus::Collected) return true;
  return !priors && !exhausted;
}

}  // namespace

void Simulator::schedule_next_gcs_meeting(Robot& gcs, Robot& exp, ExplorerState& x) {
  if (exp.status == RobotStatus::Failed) return;
  auto& g = gcs_[gcs.spec.id];
  const auto& p = cfg_.protocol;
  const auto& ep = cfg_.energy.params;
  Tick target = now_ + p.initial_explore;
  std::vector<Voxel> candidates;
  Tick hi = p.max_interval;
  if (cfg_.energy.enabled)
    hi = std::min(hi, static_cast<Tick>(ep.window() / ep.drain_per_tick) - ep.charge_duration);
  hi = std::max(hi, p.min_interval);

  if (x.bbox) {
    const auto& box = gcs.store.bboxes.at(*x.bbox).box;
    const auto explored = exp.store.map.explored_volume(box.id);
    int fitted = 0, results = 0;
    for (const auto& [f, rec] : gcs.store.features) {
      if (!box.contains(rec.position)) continue;
      ++fitted;
      if (gcs.store.results.count(f)) ++results;
    }
    const Tick elapsed = now_ - x.bbox_start;
    if (explored > 0 && elapsed > 0) {
      target = x.bbox_start + predict_completion(static_cast<double>(box.volume()), static_cast<double>(explored),
                                                 fitted, results, elapsed);
    } else if (auto t = travel(exp, exp.pose, bbox_entry_point(box, exp.pose, exp.store.map, exp.pose.z))) {
      target += *t;
    }
    // leave room for one handover round trip while features wait
    Tick lo = p.min_interval;
    if (!fplus(exp, x).empty()) {
      std::optional<Tick> best;
      for (auto j : x.inspectors) {
        if (x.declared_failed.count(j)) continue;
        Voxel at = robots_[static_cast<std::size_t>(j)].spec.start;
        if (auto it = x.last_seen.find(j); it != x.last_seen.end()) at = it->second;
        if (auto it = exp.store.plans.find(j); it != exp.store.plans.end()) at = it->second.end_position(at);
        if (auto t = travel(exp, exp.pose, at); t && (!best || *t < *best)) best = t;
      }
      if (best) lo = std::max(lo, 2 * *best + p.arrival_margin);
    }
    target = std::clamp(target, now_ + std::min(lo, hi), now_ + hi);
    if (cfg_.mode == Mode::SleiFix) {
      candidates.push_back(g.home);
    } else {
      candidates.push_back(select_meeting_corner(box, exp.pose, now_, target, gcs.nav, exp.spec.speed, 1));
      for (const auto& c : meeting_corners(box, gcs.nav, 1)) candidates.push_back(c);
    }
  } else {
    if (!work_remains(gcs.store, features_, cfg_.priors, partition_exhausted_)) {
      if (exp.status != RobotStatus::Standby) log_.add(now_, actor(exp.spec.id), "standby", json::object());
      exp.status = RobotStatus::Standby;
      // idle inspectors go to whichever explorer meets the GCS next
      for (auto j : x.inspectors) orphan_inspectors_.push_back(j);
      x.inspectors.clear();
      return;
    }
    target = now_ + std::min(p.standby_interval, hi);
    if (cfg_.mode == Mode::SleiFix) {
      candidates.push_back(g.home);
    } else if (auto v = nudge_to_free(gcs.nav, Voxel{exp.pose.x, exp.pose.y, 1})) {
      candidates.push_back(*v);
    }
  }
  candidates.push_back(gcs.pose);

  TravelTimer gcs_timer(gcs.nav, gcs.spec.speed, path_options(gcs));
  const Voxel gcs_from = g.route.empty() ? gcs.pose : g.route.back().location;
  Voxel location = gcs.pose;
  for (const auto& c : candidates) {
    if (gcs_timer.ticks(gcs_from, c) && travel(exp, exp.pose, c)) {
      location = c;
      break;
    }
  }
  // the exploration window excludes the leg to the meeting point
  if (x.bbox) {
    const Voxel entry =
        bbox_entry_point(gcs.store.bboxes.at(*x.bbox).box, exp.pose, exp.store.map, exp.pose.z);
    auto in = travel(exp, exp.pose, entry);
    auto out = travel(exp, entry, location);
    if (in && out) target += *in + *out;
  }

  if (cfg_.energy.enabled) {
    const Tick round_trip = 2 * station_eta(exp);
    const double need = ep.drain_per_tick * static_cast<double>(target - now_ + round_trip);
    if (exp.energy - need <= ep.min_level) {
      target = retime_for_energy(target, now_, ep, round_trip);
      exp.seeking_charge = true;
    }
    EnergyParams gp = ep;
    gp.capacity = gcs.capacity;
    target = gcs_retime_for_energy(target, target - now_, gcs.energy, gp, 2 * station_eta(gcs));
  }

  // Negotiate a tick the GCS route can serve without losing other visits.
  const TravelFn fn = [&](const Voxel& a, const Voxel& b) { return gcs_timer.ticks(a, b); };
  const Tick requested = target;
  const Tick push = std::max<Tick>(p.delta, 5);
  // Visits the GCS can no longer reach in time still happen (their explorers
  // wait), so they are re-timed to follow the servable ones.
  auto current = schedule_tsp_tw(g.route, gcs.pose, now_, fn, p.delta);
  if (!current.dropped.empty()) {
    Voxel at = current.visits.empty() ? gcs.pose : current.visits.back().location;
    Tick t = current.visits.empty() ? now_ : std::max(current.arrivals.back(), current.visits.back().tick);
    for (auto& d : current.dropped) {
      const auto leg = gcs_timer.ticks(at, d.location);
      t += leg ? *leg : 0;
      for (auto& v : g.route)
        if (v == d) v.tick = std::max(v.tick, t);
      at = d.location;
    }
    current = schedule_tsp_tw(g.route, gcs.pose, now_, fn, p.delta);
  }
  const auto baseline = current.dropped;
  GcsRoute route;
  for (int attempt = 0; attempt <= 30; ++attempt) {
    std::vector<GcsVisit> pending = g.route;
    pending.push_back(GcsVisit{exp.spec.id, location, target});
    route = schedule_tsp_tw(pending, gcs.pose, now_, fn, p.delta);
    const bool fits = std::all_of(route.dropped.begin(), route.dropped.end(), [&](const GcsVisit& d) {
      return std::find(baseline.begin(), baseline.end(), d) != baseline.end();
    });
    if (fits || attempt == 30) break;
    target += push;
  }
  for (const auto& d : route.dropped) route.visits.push_back(d);
  if (cfg_.mode == Mode::SleiFix || route.visits.empty()) {
    g.route.push_back(GcsVisit{exp.spec.id, location, target});
  } else {
    const bool front_changed = g.route.empty() || !(route.visits.front() == g.route.front());
    g.route = route.visits;
    if (front_changed) g.arrived = kNoTick;
  }
  if (target != requested)
    log_.add(now_, actor(gcs.spec.id), "reschedule", {{"explorer", exp.spec.id}, {"from", requested}, {"to", target}});

  Appointment a;
  a.event = MeetingEvent{location, target, exp.spec.id, gcs.spec.id, MeetingStatus::Planned, 0};
  a.with_gcs = true;
  a.meeting_row = static_cast<int>(m_.meetings.size());
  MeetingRow row;
  row.id = a.meeting_row;
  row.gcs = gcs.spec.id;
  row.explorer = exp.spec.id;
  row.planned = target;
  row.location = location;
  m_.meetings.push_back(row);
  x.gcs_meeting = a;
  log_.add(now_, actor(gcs.spec.id), "schedule",
           {{"explorer", exp.spec.id}, {"tick", target}, {"location", voxel_json(location)},
            {"bbox", x.bbox ? json(*x.bbox) : json(nullptr)}});
}

void Simulator::assign_next_bbox(Robot& gcs, Robot& exp, ExplorerState& x) {
  std::vector<BBox> boxes;
  for (const auto& [id, rec] : gcs.store.bboxes) boxes.push_back(rec.box);
  std::optional<BBoxId> pick;
  if (cfg_.mode == Mode::SleiPre) {
    while (!x.pre_order.empty()) {
      const auto& b = gcs.store.bboxes.at(x.pre_order.front()).box;
      if (b.status == BBoxStatus::Assigned && b.assigned_to == exp.spec.id) {
        pick = b.id;
        break;
      }
      x.pre_order.erase(x.pre_order.begin());
    }
  }
  if (!pick) pick = rolling_assign_next(boxes, exp.pose, gcs.store.map, priority_boxes_);
  if (!pick && !cfg_.priors) pick = no_prior_partition(gcs, exp.pose);
  if (!pick) {
    x.bbox.reset();
    return;
  }
  auto rec = gcs.store.bboxes.at(*pick);
  if (rec.box.status != BBoxStatus::Assigned || rec.box.assigned_to != exp.spec.id) {
    rec.box.status = BBoxStatus::Assigned;
    rec.box.assigned_to = exp.spec.id;
    ++rec.version;
    gcs.store.upsert(rec);
  }
  priority_boxes_.erase(*pick);
  x.bbox = *pick;
  x.bbox_start = now_;
  exp.store.upsert(gcs.store.bboxes.at(*pick));
  exp.store.map.track(rec.box);
  if (exp.status == RobotStatus::Standby) exp.status = RobotStatus::Active;
  log_.add(now_, actor(gcs.spec.id), "assign", {{"explorer", exp.spec.id}, {"bbox", *pick}});
  adopt_orphans(exp, x);
}

// A plan issued after the declaration proves the inspector is still working.
void Simulator::reinstate_heard(Robot& exp, ExplorerState& x) {
  for (auto it = x.declared_failed.begin(); it != x.declared_failed.end();) {
    const RobotId j = it->first;
    auto p = exp.store.plans.find(j);
    if (robots_[static_cast<std::size_t>(j)].status == RobotStatus::Failed || p == exp.store.plans.end() ||
        p->second.issued <= it->second) {
      ++it;
      continue;
    }
    it = x.declared_failed.erase(it);
    x.misses[j] = 0;
    if (inspectors_[j].explorer == exp.spec.id) {
      x.inspectors.push_back(j);
      std::sort(x.inspectors.begin(), x.inspectors.end());
      x.inspectors.erase(std::unique(x.inspectors.begin(), x.inspectors.end()), x.inspectors.end());
    }
    log_.add(now_, actor(exp.spec.id), "reinstate", {{"inspector", j}});
  }
}

void Simulator::adopt_orphans(Robot& exp, ExplorerState& x) {
  if (orphan_inspectors_.empty()) return;
  for (auto j : orphan_inspectors_) {
    if (robots_[static_cast<std::size_t>(j)].status == RobotStatus::Failed) continue;
    inspectors_[j].explorer = exp.spec.id;
    x.inspectors.push_back(j);
    x.declared_failed.erase(j);
  }
  orphan_inspectors_.clear();
  std::sort(x.inspectors.begin(), x.inspectors.end());
  x.inspectors.erase(std::unique(x.inspectors.begin(), x.inspectors.end()), x.inspectors.end());
  json ins = x.inspectors;
  log_.add(now_, actor(exp.spec.id), "subgroup", {{"inspectors", ins}});
}

std::optional<BBoxId> Simulator::no_prior_partition(Robot& gcs, const Voxel& pose) {
  const auto& map = gcs.store.map;
  const auto& dims = map.dims();
  std::vector<BBox> taken;
  for (const auto& [id, rec] : gcs.store.bboxes)
    if (rec.box.status != BBoxStatus::Unassigned) taken.push_back(rec.box);
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::vector<Voxel> queue;
  std::vector<Voxel> unknown;
  if (map.contains(pose) && !map.occupied(pose)) {
    queue.push_back(pose);
    seen[dims.index(pose)] = 1;
  }
  static constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Voxel v = queue[head];
    if (map.at(v) == Cell::Unknown &&
        std::none_of(taken.begin(), taken.end(), [&](const BBox& b) { return b.contains(v); }))
      unknown.push_back(v);
    for (const auto& s : kSteps) {
      const Voxel n{v.x + s[0], v.y + s[1], v.z + s[2]};
      if (!dims.contains(n) || map.occupied(n)) continue;
      auto& flag = seen[dims.index(n)];
      if (flag) continue;
      flag = 1;
      queue.push_back(n);
    }
  }
  if (unknown.empty()) {
    if (!partition_exhausted_) log_.add(now_, actor(gcs.spec.id), "partition_exhausted", json::object());
    partition_exhausted_ = true;
    return std::nullopt;
  }
  auto boxes = octree_partition(unknown, cfg_.protocol.partition_min_dim, map.resolution(), next_box_id_);
  json ids = json::array();
  for (const auto& b : boxes) {
    next_box_id_ = std::max(next_box_id_, b.id + 1);
    gcs.store.upsert(BBoxRecord{b, 0});
    ids.push_back(b.id);
  }
  log_.add(now_, actor(gcs.spec.id), "partition", {{"bboxes", ids}, {"unknown", unknown.size()}});
  std::vector<BBox> all;
  for (const auto& [id, rec] : gcs.store.bboxes) all.push_back(rec.box);
  auto pick = rolling_assign_next(all, pose, map, priority_boxes_);
  if (!pick && !boxes.empty()) pick = boxes.front().id;
  return pick;
}

// ----------------------------------------------------------- inspectors

void Simulator::retime_inspector_plan(Robot& insp) {
  const auto& s = inspectors_[insp.spec.id];
  Tick t = now_;
  Voxel p = insp.pose;
  for (std::size_t i = 0; i < insp.plan.steps.size(); ++i) {
    auto& step = insp.plan.steps[i];
    if (i == 0 && step.action == ActionKind::Inspect && s.inspect_left >= 0) {
      step.arrival = now_;
      t = now_ + s.inspect_left;
      p = step.waypoint;
      continue;
    }
    const auto dt = travel(insp, p, step.waypoint);
    step.arrival = t + (dt ? *dt : travel_ticks(static_cast<std::int64_t>(std::ceil(euclidean(p, step.waypoint) * 1000.0)),
                                                insp.nav.resolution(), insp.spec.speed));
    t = step.arrival + step.duration;
    p = step.waypoint;
  }
  insp.plan.horizon_end = t;
}

void Simulator::append_inspector_steps(Robot& insp, const std::vector<PlanStep>& steps) {
  auto& plan = insp.plan.steps;
  std::erase_if(plan, [](const PlanStep& s) { return is_dock(s); });
  for (const auto& s : steps)
    if (!insp.store.results.count(s.target)) plan.push_back(s);
  retime_inspector_plan(insp);
  if (cfg_.energy.enabled && !cfg_.world.charging_stations.empty()) {
    const auto& ep = cfg_.energy.params;
    const auto station = [&](const Voxel& from) {
      const Voxel* best = nullptr;
      for (const auto& st : cfg_.world.charging_stations)
        if (!best || squared_distance(st, from) < squared_distance(*best, from)) best = &st;
      return *best;
    };
    const auto ticks = [&](const Voxel& a, const Voxel& b) {
      if (auto t = travel(insp, a, b)) return *t;
      return static_cast<Tick>(std::ceil(euclidean(a, b) * 2.0));
    };
    std::vector<PlanStep> out;
    double energy = insp.status == RobotStatus::Charging ? insp.capacity : insp.energy;
    Voxel p = insp.pose;
    for (const auto& s : plan) {
      const double use = ep.drain_per_tick * static_cast<double>(ticks(p, s.waypoint) + s.duration);
      const double home = ep.drain_per_tick * static_cast<double>(ticks(s.waypoint, station(s.waypoint)) + 10);
      if (s.action != ActionKind::Charge && energy - use - home <= ep.min_level) {
        const Voxel st = station(p);
        out.push_back(PlanStep{st, 0, ActionKind::Charge, 0, std::max<Tick>(1, ep.charge_duration)});
        energy = insp.capacity - ep.drain_per_tick * static_cast<double>(ticks(st, s.waypoint) + s.duration);
      } else {
        energy -= use;
      }
      if (s.action == ActionKind::Charge) energy = insp.capacity;
      out.push_back(s);
      p = s.waypoint;
    }
    out.push_back(PlanStep{station(p), 0, ActionKind::Charge, kDockTarget, 0});
    plan = std::move(out);
    retime_inspector_plan(insp);
  }
  publish_plan(insp);
}

void Simulator::give_initial_plans() {
  for (auto& [jid, s] : inspectors_) {
    auto& r = robots_[static_cast<std::size_t>(jid)];
    r.plan = LocalPlan{};
    if (s.explorer != kNoRobot) {
      const auto& x = explorers_[s.explorer];
      const auto& ex = robots_[static_cast<std::size_t>(s.explorer)];
      if (x.bbox) {
        const auto& box = ex.store.bboxes.at(*x.bbox).box;
        const int z = std::clamp(r.pose.z, box.min_corner.z, box.max_corner.z);
        const Voxel entry = bbox_entry_point(box, r.pose, r.nav, z);
        if (entry != r.pose) r.plan.steps.push_back(PlanStep{entry, 0, ActionKind::Move, -1, 0});
      }
    }
    retime_inspector_plan(r);
    publish_plan(r);
  }
}

}  // namespace slei

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "slei/comm.hpp"
#include "slei/explore.hpp"
#include "slei/gcs.hpp"
#include "slei/rng.hpp"
#include "slei/subgroup.hpp"
#include "slei/world_io.hpp"

namespace slei {

enum class Role : std::uint8_t { Gcs, Explorer, Inspector };
enum class RobotStatus : std::uint8_t { Active, Charging, Failed, Standby };
enum class Mode : std::uint8_t { Slei3d, SleiFix, SleiPre };

const char* to_string(Role r);
const char* to_string(RobotStatus s);
const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RobotSpec {
  RobotId id = 0;
  Role role = Role::Explorer;
  Voxel start;
  double speed = 1.0;         // m/tick
  double sensor_range = 2.0;  // m
  double comm_range = 5.0;    // m
};

struct ProtocolParams {
  Tick delta = 10;  // mismatch tolerance
  Tick soei_period = 5;
  Tick replan_period = 5;
  int n_samples = 5;
  std::size_t k_cap = 8;
  Tick arrival_margin = 2;
  Tick min_interval = 20;
  Tick max_interval = 200;
  Tick initial_explore = 40;  // first interval, before any prediction is possible
  Tick standby_interval = 80;
  std::optional<Tick> max_wait;  // explorer waiting for the GCS; unbounded by default
  std::int64_t defer_feature_cost = 200;
  std::int64_t defer_result_cost = 100;
  double partition_min_dim = 4.0;  // meters, prior-free partitioning
  GaParams ga{};
};

struct EnergyConfig {
  bool enabled = false;
  EnergyParams params{300.0, 60.0, 1.0, 30.0, 8};
  double gcs_capacity_scale = 2.0;  // GCS battery relative to the others
};

struct FailureSpec {
  RobotId robot = 0;
  Tick tick = 0;
};

struct SimConfig {
  WorldSpec world;
  std::vector<RobotSpec> robots;
  ProtocolParams protocol{};
  Mode mode = Mode::Slei3d;
  EnergyConfig energy{};
  bool priors = true;
  std::vector<FailureSpec> failures;
  std::uint64_t seed = 1;
  Tick tick_budget = 0;  // 0 selects the default budget
};

/// Throws ConfigError describing the first problem found.
void validate(const SimConfig& cfg);
Tick default_tick_budget(const SimConfig& cfg);

struct Event {
  Tick tick = 0;
  std::string actor;
  std::string kind;
  nlohmann::json payload;
};

class EventLog {
 public:
  void add(Tick tick, std::string actor, std::string kind, nlohmann::json payload = nlohmann::json::object());
  const std::vector<Event>& events() const { return events_; }
  std::string to_ndjson() const;
  std::size_t count(const std::string& kind) const;

 private:
  std::vector<Event> events_;
};

struct IdleCounters {
  Tick travel = 0;   // tau minus
  Tick wait = 0;     // tau plus
  Tick standby = 0;  // explorer without a box, reported separately
};

struct MeetingRow {
  int id = 0;
  RobotId gcs = kNoRobot;
  RobotId explorer = kNoRobot;
  Tick planned = 0;
  Voxel location;
  Tick gcs_arrival = kNoTick;
  Tick explorer_arrival = kNoTick;
  Tick met = kNoTick;
  std::string status = "planned";
  Tick gcs_idle = 0;
};

struct SoeiRow {
  Tick tick = 0;
  RobotId explorer = kNoRobot;
  std::vector<RobotId> chosen;
  Tick tau = 0, tau_plus = 0, tau_minus = 0;
  std::map<RobotId, int> allocated;
  bool used_ga = false;
};

struct TickRow {
  Tick tick = 0;
  std::array<int, 5> feature_status{};
  int active = 0, charging = 0, standby = 0, failed = 0;
  double min_energy_fraction = 1.0;
};

struct Metrics {
  bool finished = false;
  Tick finish_tick = 0;
  double finish_rate = 0.0;
  int features_total = 0;
  int features_collected = 0;
  std::map<RobotId, IdleCounters> idle;
  Tick total_idle = 0;
  int gcs_explorer_meetings = 0;
  int explorer_inspector_meetings = 0;
  int spontaneous_meetings = 0;
  std::int64_t bytes_total = 0;
  double bytes_per_meeting = 0.0;
  double overlap_rate = 0.0;
  int recharges = 0;
  double min_energy_fraction = 1.0;
  bool energy_positive = true;
  int bboxes_total = 0;
  int replans = 0;
  int soei_runs = 0;
  std::vector<TickRow> ticks;
  std::vector<MeetingRow> meetings;
  std::vector<SoeiRow> soei;

  double meetings_per_bbox() const {
    return bboxes_total > 0 ? static_cast<double>(gcs_explorer_meetings) / bboxes_total : 0.0;
  }
};

struct RunResult {
  Metrics metrics;
  EventLog log;
};

/// Deterministic tick engine.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  /// Advances one tick. Returns false once the mission has ended.
  bool step();
  RunResult run();

  Tick now() const { return now_; }
  bool done() const { return done_; }
  const EventLog& log() const { return log_; }
  Metrics metrics() const;

  struct Appointment {
    MeetingEvent event;
    bool with_gcs = false;
    std::vector<PlanStep> handover;  // steps the inspector appends
    std::vector<FeatureId> features;
    Tick arrived = kNoTick;  // explorer reached the meeting point
    int meeting_row = -1;
  };

  struct Robot {
    RobotSpec spec;
    Voxel pose;
    RobotStatus status = RobotStatus::Active;
    DataStore store;
    LocalMap nav;  // private obstacle map of GCS and inspectors
    double energy = 0.0;
    double capacity = 0.0;
    bool docked = false;
    LocalPlan plan;
    // Motion.
    std::optional<Voxel> goal;
    std::vector<Voxel> path;
    std::size_t path_next = 0;
    std::int64_t progress = 0;
    int blocked = 0;
    bool avoid_robots = false;
    bool moved = false;
    int activity = 0;  // 0 working, 1 travel idle, 2 waiting idle, 3 standby
    // Energy.
    bool seeking_charge = false;
    Tick station_eta = 0;
    Tick station_eta_at = -1000;
    IdleCounters idle;
  };

  struct ExplorerState {
    RobotId gcs = kNoRobot;
    std::optional<BBoxId> bbox;
    Tick bbox_start = 0;
    std::vector<RobotId> inspectors;
    std::deque<Appointment> inspector_meetings;
    std::optional<Appointment> gcs_meeting;
    Tick last_replan = -1000;
    Tick last_soei = -1000;
    bool need_replan = true;
    std::map<FeatureId, RobotId> reserved;
    std::map<RobotId, int> misses;
    std::map<RobotId, Tick> declared_failed;  // inspector -> tick declared
    std::map<RobotId, Voxel> last_seen;
    std::vector<BBoxId> pre_order;
    std::int64_t unknown_at_meeting = -1;  // explorer map unknown count at the last GCS meeting
    bool explored_cache = false;
    Tick explored_at = -1;
  };

  struct GcsState {
    std::vector<GcsVisit> route;
    Tick arrived = kNoTick;  // at the front visit
    Voxel home;
    std::vector<RobotId> explorers;
  };

  struct InspectorState {
    RobotId explorer = kNoRobot;
    Tick inspect_left = -1;
  };

  const Robot& robot(RobotId id) const { return robots_.at(static_cast<std::size_t>(id)); }
  const std::vector<Robot>& robots() const { return robots_; }
  const std::vector<Feature>& features() const { return features_; }
  const std::map<RobotId, ExplorerState>& explorers() const { return explorers_; }
  const DataStore& gcs_store() const;

 private:
  friend struct SimAccess;

  // sim.cpp
  void init();
  void move_robots();
  void move_one(Robot& r, std::set<Voxel>& occupied);
  void sense_all();
  void energy_update();
  void fire_failures();
  void record_tick();
  void account_idle();
  void refresh_nav(Robot& r);
  void check_finish();
  Tick station_eta(Robot& r);
  std::optional<Voxel> nearest_station(const Robot& r) const;
  const LocalMap& nav_map(const Robot& r) const;
  PathOptions path_options(const Robot& r) const;
  bool arrived_at(const Robot& r, const Voxel& goal) const;
  void set_goal(Robot& r, std::optional<Voxel> goal);
  std::optional<Tick> travel(const Robot& r, const Voxel& a, const Voxel& b) const;
  void note_status(FeatureId f, FeatureStatus s);
  std::string actor(RobotId id) const;

  // sim_protocol.cpp
  void decide_goals();
  void explorer_goal(Robot& r, ExplorerState& x);
  void inspector_goal(Robot& r, InspectorState& s);
  void gcs_goal(Robot& r, GcsState& g);
  void run_meetings();
  bool gcs_meeting(Robot& gcs, Robot& exp);
  bool inspector_meeting(Robot& exp, ExplorerState& x, Robot& insp);
  void spontaneous_meetings();
  std::int64_t exchange_logged(Robot& a, Robot& b, const char* kind);
  void mismatch();
  void recover_explorer_failure(RobotId failed, RobotId gcs);
  void plan_all();
  void explorer_replan(Robot& r, ExplorerState& x);
  void explorer_soei(Robot& r, ExplorerState& x);
  void schedule_next_gcs_meeting(Robot& gcs, Robot& exp, ExplorerState& x);
  void assign_next_bbox(Robot& gcs, Robot& exp, ExplorerState& x);
  void adopt_orphans(Robot& exp, ExplorerState& x);
  void reinstate_heard(Robot& exp, ExplorerState& x);
  std::vector<FeatureTask> fplus(const Robot& r, const ExplorerState& x) const;
  int pending_results(const Robot& r, const ExplorerState& x, RobotId insp) const;
  void append_inspector_steps(Robot& insp, const std::vector<PlanStep>& steps);
  void retime_inspector_plan(Robot& insp);
  void publish_plan(Robot& r);
  bool bbox_complete(const Robot& gcs, const Robot& exp, BBoxId id);
  bool has_news(const Robot& gcs, const Robot& exp, const ExplorerState& x) const;
  void sync_gcs();
  void collect(Robot& gcs);
  void release_reservations(ExplorerState& x, const Appointment& a);
  void drop_inspector_meetings(RobotId explorer, ExplorerState& x, const char* reason);
  void give_initial_plans();
  void inspect_progress(Robot& r, InspectorState& s);
  std::optional<BBoxId> no_prior_partition(Robot& gcs, const Voxel& pose);

  SimConfig cfg_;
  SeedSplitter seeds_;
  std::mt19937_64 ga_rng_;
  Tick now_ = 0;
  Tick budget_ = 0;
  bool done_ = false;
  bool finished_ = false;
  Tick finish_tick_ = 0;
  std::vector<Robot> robots_;
  std::vector<Feature> features_;
  std::map<RobotId, ExplorerState> explorers_;
  std::map<RobotId, GcsState> gcs_;
  std::map<RobotId, InspectorState> inspectors_;
  std::set<BBoxId> priority_boxes_;
  std::vector<RobotId> orphan_inspectors_;
  std::set<std::pair<RobotId, RobotId>> linked_prev_;
  std::vector<std::uint32_t> sensed_by_;
  std::int64_t sensed_any_ = 0, sensed_multi_ = 0;
  std::set<RobotId> exchanged_this_tick_;
  std::set<RobotId> suspects_;
  std::set<FeatureId> collected_;
  BBoxId next_box_id_ = 0;
  bool partition_exhausted_ = false;
  EventLog log_;
  Metrics m_;
};

RunResult run_simulation(const SimConfig& cfg);

/// JSON summary of a run (what metrics.json holds).
nlohmann::json metrics_to_json(const Metrics& m);
std::string ticks_csv(const Metrics& m);
std::string meetings_csv(const Metrics& m);
std::string soei_csv(const Metrics& m);

}  // namespace slei

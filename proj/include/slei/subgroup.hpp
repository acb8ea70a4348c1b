#pragma once

#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "slei/comm.hpp"
#include "slei/explore.hpp"
#include "slei/genetic.hpp"
#include "slei/mvrp.hpp"

namespace slei {

enum class MeetingStatus : std::uint8_t { Planned, Confirmed, Met, Missed };

struct MeetingEvent {
  Voxel location;
  Tick tick = 0;
  RobotId explorer = kNoRobot;
  RobotId peer = kNoRobot;
  MeetingStatus status = MeetingStatus::Planned;
  int attempt = 0;  // retries after a missed rendezvous
};

inline constexpr Tick kOpenEnded = std::numeric_limits<Tick>::max() / 4;

/// A place from which the explorer can talk to an inspector while the
/// inspector sits at `peer_waypoint` during [window_begin, window_end].
struct MeetSample {
  Voxel point;
  Voxel peer_waypoint;
  Tick window_begin = 0;
  Tick window_end = kOpenEnded;
  Tick idle_from = kOpenEnded;  // the inspector idles from this tick (plan end)
};

/// What the explorer believes about one inspector.
struct InspectorView {
  RobotId id = kNoRobot;
  Voxel pose;
  LocalPlan plan;
  int pending_results = 0;
};

struct FeatureTask {
  FeatureId id = 0;
  Voxel position;
  Tick inspect_duration = 3;
  Priority priority = Priority::Normal;
};

std::vector<std::vector<MeetSample>> sample_los(const LocalMap& map, std::span<const InspectorView> inspectors,
                                                const Voxel& explorer_pose, Tick now, const LinkSpec& link,
                                                int n_samples);

struct OptMeetResult {
  bool feasible = false;
  std::vector<MeetingEvent> meetings;
  Tick travel = 0;          // explorer travel idle
  Tick explorer_wait = 0;   // explorer holding at meeting points
  Tick inspector_wait = 0;  // inspectors idling past their plan end
  Tick idle() const { return travel + explorer_wait + inspector_wait; }
  Voxel end_position;
  Tick end_tick = 0;
};

/// Times a fixed meeting sequence. Each meeting happens at the earliest tick
/// the explorer is there and the inspector is inside its window. When
/// `deadline` is set the explorer must still reach it afterwards.
OptMeetResult opt_meet(RobotId explorer, std::span<const MeetSample> sequence, std::span<const RobotId> peers,
                       const Voxel& pose, Tick now, TravelTimer& timer, const std::optional<Meeting>& deadline);

struct AllocationResult {
  bool feasible = false;
  std::map<RobotId, std::vector<FeatureId>> allocation;
  std::map<RobotId, std::vector<PlanStep>> appended;  // new steps per inspector
  Tick travel = 0;
};

/// Routes features to inspectors, each starting from the end of its plan.
AllocationResult allocate_features(std::span<const InspectorView> chosen, std::span<const FeatureTask> features,
                                   TravelTimer& inspector_timer, Tick now);

struct SoeiParams {
  int n_samples = 5;
  std::int64_t exact_limit = 5000;
  GaParams ga{};
  std::int64_t defer_feature_cost = 200;  // per feature left unallocated
  std::int64_t defer_result_cost = 100;   // per ready result left uncollected
};

struct SoeiInput {
  RobotId explorer = kNoRobot;
  Voxel pose;
  Tick now = 0;
  double speed = 1.0;
  double inspector_speed = 1.0;
  const LocalMap* map = nullptr;
  std::vector<FeatureTask> features;
  std::vector<InspectorView> inspectors;
  LinkSpec link{};
  std::optional<Meeting> deadline;
  std::vector<std::vector<MeetSample>> samples;  // computed when empty
};

struct SubgroupPlan {
  std::vector<RobotId> chosen;
  std::vector<MeetingEvent> meetings;
  std::map<RobotId, std::vector<FeatureId>> allocation;
  std::map<RobotId, std::vector<PlanStep>> appended;
  Tick idle_plus = 0;
  Tick idle_minus = 0;
  std::int64_t objective = 0;  // idle plus deferral penalties
  bool used_ga = false;
  Tick idle() const { return idle_plus + idle_minus; }
};

/// Best meeting order and sample choice for one inspector subset.
struct SequenceChoice {
  OptMeetResult timing;
  std::vector<int> order;   // indices into the subset
  std::vector<int> choice;  // sample index per subset member
  bool used_ga = false;
};

SequenceChoice best_sequence(RobotId explorer, std::span<const RobotId> subset,
                             const std::vector<const std::vector<MeetSample>*>& samples, const Voxel& pose, Tick now,
                             TravelTimer& timer, const std::optional<Meeting>& deadline, const SoeiParams& params,
                             std::mt19937_64& rng);

SubgroupPlan soei(SoeiInput input, const SoeiParams& params, std::mt19937_64& rng);

}  // namespace slei

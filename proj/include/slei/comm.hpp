#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

#include "slei/plan.hpp"
#include "slei/world.hpp"

namespace slei {

struct LinkSpec {
  double range_m = 5.0;
  bool requires_los = true;
};

/// Thrown when two stores are merged without a usable link. This is a
/// simulator bug, not a runtime condition.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FeatureRecord {
  FeatureId id = 0;
  Voxel position;
  FeatureStatus status = FeatureStatus::Fitted;
  RobotId assignee = kNoRobot;
  Tick stamp = 0;
  Priority priority = Priority::Normal;
  Tick inspect_duration = 3;

  auto operator<=>(const FeatureRecord&) const = default;
};

/// Inspection result s_q.
struct InspectionResult {
  FeatureId feature = 0;
  RobotId inspector = kNoRobot;
  Tick tick = 0;
  std::uint32_t payload_bytes = 64;

  auto operator<=>(const InspectionResult&) const = default;
};

struct BBoxRecord {
  BBox box;
  int version = 0;
};

/// Everything a robot carries and trades at a meeting.
struct DataStore {
  RobotId owner = kNoRobot;
  LocalMap map;
  std::map<FeatureId, FeatureRecord> features;
  std::map<FeatureId, InspectionResult> results;
  std::map<RobotId, LocalPlan> plans;
  std::map<BBoxId, BBoxRecord> bboxes;
  std::int64_t bytes_exchanged = 0;

  DataStore() = default;
  DataStore(RobotId id, Dims dims, double resolution) : owner(id), map(id, dims, resolution) {}

  /// Inserts or upgrades a feature record using the merge rule.
  void upsert(const FeatureRecord& rec);
  /// Stores a result and lifts the matching record to at least Inspected.
  void add_result(const InspectionResult& res);
  void upsert(const BBoxRecord& rec);
  void upsert_plan(const LocalPlan& plan);
};

bool link_available(const WorldGrid& truth, const Voxel& a, const Voxel& b, const LinkSpec& link);

/// Merges `from` into `into` and returns the number of bytes `into` received.
std::int64_t merge_into(DataStore& into, const DataStore& from);

/// Two-way merge. Both stores end up equal on every shared field; each
/// store's byte counter grows by the size of the symmetric difference.
std::int64_t exchange_in_place(DataStore& a, DataStore& b);
std::pair<DataStore, DataStore> exchange(DataStore a, DataStore b);

/// exchange_in_place guarded by the link model.
std::int64_t checked_exchange(const WorldGrid& truth, DataStore& a, const Voxel& pa, DataStore& b, const Voxel& pb,
                              const LinkSpec& link);

bool same_content(const DataStore& a, const DataStore& b);

}  // namespace slei

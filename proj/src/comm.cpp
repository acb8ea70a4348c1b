#include "slei/comm.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

namespace slei {

namespace {

constexpr std::int64_t kCellBytes = 5;
constexpr std::int64_t kFeatureBytes = 40;
constexpr std::int64_t kResultHeader = 16;
constexpr std::int64_t kPlanHeader = 16;
constexpr std::int64_t kPlanStepBytes = 24;
constexpr std::int64_t kBBoxBytes = 24;

bool feature_wins(const FeatureRecord& a, const FeatureRecord& b) {
  return std::tie(a.status, a.stamp, a.assignee) > std::tie(b.status, b.stamp, b.assignee);
}

bool plan_wins(const LocalPlan& a, const LocalPlan& b) {
  if (a.issued != b.issued) return a.issued > b.issued;
  return a > b;
}

bool bbox_wins(const BBoxRecord& a, const BBoxRecord& b) {
  return std::tie(a.version, a.box.status, a.box.assigned_to) > std::tie(b.version, b.box.status, b.box.assigned_to);
}

// An inspected record is fully determined by its result, so lifted copies from
// different stores compare equal and merge order stops mattering.
void canonicalize(FeatureRecord& rec, const InspectionResult& res) {
  if (rec.status > FeatureStatus::Inspected) return;
  rec.status = FeatureStatus::Inspected;
  rec.stamp = res.tick;
  rec.assignee = res.inspector;
}

}  // namespace

void DataStore::upsert(const FeatureRecord& incoming) {
  FeatureRecord rec = incoming;
  if (auto r = results.find(rec.id); r != results.end()) canonicalize(rec, r->second);
  auto [it, inserted] = features.try_emplace(rec.id, rec);
  if (!inserted && feature_wins(rec, it->second)) it->second = rec;
}

void DataStore::add_result(const InspectionResult& res) {
  auto [it, inserted] = results.try_emplace(res.feature, res);
  if (!inserted && res < it->second) it->second = res;
  if (auto f = features.find(res.feature); f != features.end()) canonicalize(f->second, it->second);
}

void DataStore::upsert(const BBoxRecord& rec) {
  auto [it, inserted] = bboxes.try_emplace(rec.box.id, rec);
  if (!inserted && bbox_wins(rec, it->second)) it->second = rec;
}

void DataStore::upsert_plan(const LocalPlan& plan) {
  auto [it, inserted] = plans.try_emplace(plan.owner, plan);
  if (!inserted && plan_wins(plan, it->second)) it->second = plan;
}

bool link_available(const WorldGrid& truth, const Voxel& a, const Voxel& b, const LinkSpec& link) {
  if (euclidean(a, b) * truth.resolution() > link.range_m + 1e-9) return false;
  return !link.requires_los || raycast_los(truth, a, b);
}

std::int64_t merge_into(DataStore& into, const DataStore& from) {
  std::int64_t bytes = 0;
  if (from.map.size() == into.map.size()) {
    const auto& dims = into.map.dims();
    for (std::size_t i = 0; i < from.map.size(); ++i) {
      const Cell theirs = from.map.at_index(i);
      if (theirs == Cell::Unknown) continue;
      const Cell mine = into.map.at_index(i);
      if (mine == Cell::Unknown) {
        into.map.observe(dims.voxel(i), theirs);
        bytes += kCellBytes;
      }
    }
  }
  for (const auto& [id, res] : from.results) {
    auto it = into.results.find(id);
    if (it == into.results.end() || res < it->second) {
      if (it == into.results.end()) bytes += kResultHeader + res.payload_bytes;
      into.add_result(res);
    }
  }
  for (const auto& [id, rec] : from.features) {
    auto it = into.features.find(id);
    const std::optional<FeatureRecord> before =
        it == into.features.end() ? std::nullopt : std::optional<FeatureRecord>(it->second);
    into.upsert(rec);
    if (!before || *before != into.features.at(id)) bytes += kFeatureBytes;
  }
  for (const auto& [id, plan] : from.plans) {
    auto it = into.plans.find(id);
    if (it == into.plans.end() || plan_wins(plan, it->second)) {
      bytes += kPlanHeader + kPlanStepBytes * static_cast<std::int64_t>(plan.steps.size());
      into.upsert_plan(plan);
    }
  }
  for (const auto& [id, rec] : from.bboxes) {
    auto it = into.bboxes.find(id);
    if (it == into.bboxes.end() || bbox_wins(rec, it->second)) {
      bytes += kBBoxBytes;
      into.upsert(rec);
    }
  }
  return bytes;
}

std::int64_t exchange_in_place(DataStore& a, DataStore& b) {
  if (&a == &b) return 0;
  const DataStore a0 = a;
  const std::int64_t to_a = merge_into(a, b);
  const std::int64_t to_b = merge_into(b, a0);
  const std::int64_t total = to_a + to_b;
  a.bytes_exchanged += total;
  b.bytes_exchanged += total;
  return total;
}

std::pair<DataStore, DataStore> exchange(DataStore a, DataStore b) {
  exchange_in_place(a, b);
  return {std::move(a), std::move(b)};
}

std::int64_t checked_exchange(const WorldGrid& truth, DataStore& a, const Voxel& pa, DataStore& b, const Voxel& pb,
                              const LinkSpec& link) {
  if (!truth.contains(pa) || !truth.contains(pb) || !link_available(truth, pa, pb, link))
    throw ProtocolViolation("exchange between robots " + std::to_string(a.owner) + " and " + std::to_string(b.owner) +
                            " without a link");
  return exchange_in_place(a, b);
}

bool same_content(const DataStore& a, const DataStore& b) {
  if (a.map.size() != b.map.size()) return false;
  for (std::size_t i = 0; i < a.map.size(); ++i)
    if (a.map.at_index(i) != b.map.at_index(i)) return false;
  if (a.features != b.features || a.results != b.results || a.plans != b.plans) return false;
  if (a.bboxes.size() != b.bboxes.size()) return false;
  for (const auto& [id, rec] : a.bboxes) {
    auto it = b.bboxes.find(id);
    if (it == b.bboxes.end() || it->second.version != rec.version || it->second.box.status != rec.box.status ||
        it->second.box.assigned_to != rec.box.assigned_to)
      return false;
  }
  return true;
}

}  // namespace slei

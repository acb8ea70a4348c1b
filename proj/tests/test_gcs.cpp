#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instances.hpp"
#include "slei/gcs.hpp"

using namespace slei;

namespace {

LocalMap open_map(Dims d) { return oracle::full_map(WorldGrid(d, 1.0, true)); }

}  // namespace

TEST(Predictor, Examples) {
  EXPECT_EQ(predict_completion(1000, 500, 10, 5, 100), 400);
  EXPECT_EQ(predict_completion(1000, 250, 0, 0, 100), 400);
  EXPECT_EQ(predict_completion(800, 800, 7, 7, 123), 123);
  EXPECT_EQ(prediction_basis(0), PredictionBasis::VolumeRate);
  EXPECT_EQ(prediction_basis(3), PredictionBasis::FeatureRate);
}

TEST(Predictor, RejectsNoProgress) {
  EXPECT_THROW(predict_completion(1000, 0, 1, 1, 10), std::domain_error);
  EXPECT_THROW(predict_completion(1000, 10, 1, 1, 0), std::domain_error);
}

TEST(Predictor, MatchesReferenceWithinRounding) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> vol(10.0, 5000.0), frac(0.01, 1.0);
  std::uniform_int_distribution<int> cnt(0, 30), te(1, 2000);
  for (int i = 0; i < 1000; ++i) {
    const double vb = std::round(vol(rng));
    const double vm = std::max(1.0, std::round(vb * frac(rng)));
    const int results = cnt(rng);
    const int fitted = results + cnt(rng);
    const Tick t = te(rng);
    const double want = oracle::predictor(vb, vm, fitted, results, static_cast<double>(t));
    const Tick got = predict_completion(vb, vm, fitted, results, t);
    EXPECT_GE(static_cast<double>(got), want - 1e-6) << i;
    EXPECT_LT(static_cast<double>(got), want + 1.0) << i;
  }
}

TEST(MeetingCorner, ExplorerAtCornerTargetNow) {
  const auto map = open_map({12, 12, 6});
  const BBox box{0, {2, 2, 1}, {8, 8, 4}};
  EXPECT_EQ(select_meeting_corner(box, {8, 8, 1}, 50, 50, map, 1.0, 1), (Voxel{8, 8, 1}));
}

TEST(MeetingCorner, EquidistantTieGoesToSmallest) {
  const auto map = open_map({12, 12, 6});
  const BBox box{0, {2, 2, 1}, {8, 8, 4}};
  EXPECT_EQ(select_meeting_corner(box, {5, 5, 1}, 0, 0, map, 1.0, 1), (Voxel{2, 2, 1}));
}

TEST(MeetingCorner, WalledCornerSkipped) {
  WorldGrid g({12, 12, 6}, 1.0, true);
  // seal the pocket around (1..2, 1..2) up to the ceiling
  for (int z = 1; z < 5; ++z)
    for (int k = 1; k <= 3; ++k) {
      g.set_occupied({3, k, z}, true);
      g.set_occupied({k, 3, z}, true);
    }
  const auto map = oracle::full_map(g);
  const BBox box{0, {2, 2, 1}, {8, 8, 4}};
  const auto corners = meeting_corners(box, map, 1);
  EXPECT_EQ(corners.size(), 4u);
  const auto c = select_meeting_corner(box, {5, 5, 1}, 0, 0, map, 1.0, 1);
  EXPECT_EQ(c, (Voxel{2, 8, 1}));
}

TEST(MeetingCorner, OccupiedCornerNudged) {
  WorldGrid g({12, 12, 6}, 1.0, true);
  g.set_occupied({8, 8, 1}, true);
  const auto map = oracle::full_map(g);
  const BBox box{0, {2, 2, 1}, {8, 8, 4}};
  const auto corners = meeting_corners(box, map, 1);
  ASSERT_EQ(corners.size(), 4u);
  EXPECT_NE(std::find(corners.begin(), corners.end(), Voxel{7, 8, 1}), corners.end());
  for (const auto& c : corners) EXPECT_FALSE(map.occupied(c));
}

TEST(EntryPoint, ClampsPoseIntoFootprint) {
  const auto map = open_map({12, 12, 6});
  const BBox box{0, {4, 4, 1}, {8, 8, 4}};
  EXPECT_EQ(bbox_entry_point(box, {1, 6, 3}, map, 1), (Voxel{4, 6, 1}));
  EXPECT_EQ(bbox_entry_point(box, {6, 6, 3}, map, 2), (Voxel{6, 6, 2}));
}

TEST(TspTw, SingleVisitIdleIsSlack) {
  const auto travel = [](const Voxel& a, const Voxel& b) -> std::optional<Tick> {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  };
  const std::vector<GcsVisit> v{{1, {5, 0, 1}, 20}};
  const auto r = schedule_tsp_tw(v, {0, 0, 1}, 0, travel, 3);
  ASSERT_EQ(r.visits.size(), 1u);
  EXPECT_EQ(r.arrivals[0], 5);
  EXPECT_EQ(r.idle, 15);
  EXPECT_TRUE(r.dropped.empty());
}

TEST(TspTw, OnlyOneOrderWorks) {
  const auto travel = [](const Voxel& a, const Voxel& b) -> std::optional<Tick> {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  };
  // B is due later but sits past A on the line
  const std::vector<GcsVisit> v{{2, {10, 0, 1}, 18}, {1, {4, 0, 1}, 10}};
  const auto r = schedule_tsp_tw(v, {0, 0, 1}, 0, travel, 1);
  ASSERT_EQ(r.visits.size(), 2u);
  EXPECT_EQ(r.visits[0].explorer, 1);
  EXPECT_EQ(r.visits[1].explorer, 2);
  EXPECT_EQ(r.idle, 6 + 2);
}

TEST(TspTw, ImpossibleVisitDropped) {
  const auto travel = [](const Voxel& a, const Voxel& b) -> std::optional<Tick> {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  };
  const std::vector<GcsVisit> v{{1, {4, 0, 1}, 10}, {2, {50, 0, 1}, 12}};
  const auto r = schedule_tsp_tw(v, {0, 0, 1}, 0, travel, 2);
  ASSERT_EQ(r.visits.size(), 1u);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].explorer, 2);
}

TEST(TspTw, MatchesBruteForceUpToFour) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = oracle::random_tsp(rng);
    const auto [count, idle] = oracle::tsp_oracle(c);
    const auto r = schedule_tsp_tw(c.visits, c.start, 0, oracle::manhattan, c.delta);
    EXPECT_EQ(static_cast<int>(r.visits.size()), count) << trial;
    EXPECT_EQ(r.idle, idle) << trial;
    EXPECT_EQ(r.visits.size() + r.dropped.size(), c.visits.size()) << trial;
    for (std::size_t i = 0; i < r.visits.size(); ++i) EXPECT_LE(r.arrivals[i], r.visits[i].tick + c.delta) << trial;
  }
}

TEST(TspTw, HeuristicAboveExactLimitStaysFeasible) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(0, 30), due(0, 200);
  const auto travel = [](const Voxel& a, const Voxel& b) -> std::optional<Tick> {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  };
  std::vector<GcsVisit> v;
  for (int i = 0; i < 12; ++i) v.push_back({i, {coord(rng), coord(rng), 1}, due(rng)});
  const auto r = schedule_tsp_tw(v, {0, 0, 1}, 0, travel, 5);
  EXPECT_EQ(r.visits.size() + r.dropped.size(), v.size());
  Voxel at{0, 0, 1};
  Tick t = 0;
  for (std::size_t i = 0; i < r.visits.size(); ++i) {
    t += *travel(at, r.visits[i].location);
    EXPECT_EQ(r.arrivals[i], t);
    EXPECT_LE(t, r.visits[i].tick + 5);
    t = std::max(t, r.visits[i].tick);
    at = r.visits[i].location;
  }
}

TEST(SplitInspectors, Examples) {
  const std::vector<std::int64_t> equal{500, 500}, skew{100, 300};
  EXPECT_EQ(split_inspectors(equal, 4), (std::vector<int>{2, 2}));
  EXPECT_EQ(split_inspectors(skew, 5), (std::vector<int>{1, 4}));
}

TEST(SplitInspectors, ConservesAndKeepsOneEach) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> nb(1, 6), vol(1, 1000), ni(0, 15);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> v(nb(rng));
    for (auto& x : v) x = vol(rng);
    const int n = ni(rng);
    const auto s = split_inspectors(v, n);
    ASSERT_EQ(s.size(), v.size());
    EXPECT_EQ(std::accumulate(s.begin(), s.end(), 0), n) << trial;
    if (n >= static_cast<int>(v.size()))
      for (int k : s) EXPECT_GE(k, 1) << trial;
  }
}

TEST(RollingAssign, NearestFirstOneAtATime) {
  const auto map = open_map({30, 8, 5});
  std::vector<BBox> boxes{{0, {20, 1, 1}, {24, 6, 3}}, {1, {2, 1, 1}, {6, 6, 3}}, {2, {10, 1, 1}, {14, 6, 3}}};
  Voxel pose{1, 3, 1};
  std::vector<BBoxId> order;
  while (auto b = rolling_assign_next(boxes, pose, map)) {
    order.push_back(*b);
    boxes[*b].status = BBoxStatus::Complete;
    pose = {boxes[*b].max_corner.x, 3, 1};
  }
  EXPECT_EQ(order, (std::vector<BBoxId>{1, 2, 0}));
}

TEST(RollingAssign, InitialGivesDistinctNearest) {
  const auto map = open_map({30, 8, 5});
  const std::vector<BBox> boxes{{0, {20, 1, 1}, {24, 6, 3}}, {1, {2, 1, 1}, {6, 6, 3}}, {2, {10, 1, 1}, {14, 6, 3}}};
  const std::map<RobotId, Voxel> poses{{3, {1, 3, 1}}, {4, {4, 3, 1}}};
  const auto a = rolling_assign_initial(boxes, poses, map);
  EXPECT_EQ(a.at(3), 1);
  EXPECT_EQ(a.at(4), 2);
}

TEST(RollingAssign, PriorityBoxWins) {
  const auto map = open_map({30, 8, 5});
  const std::vector<BBox> boxes{{0, {20, 1, 1}, {24, 6, 3}}, {1, {2, 1, 1}, {6, 6, 3}}};
  EXPECT_EQ(rolling_assign_next(boxes, {1, 3, 1}, map, {0}), 0);
}

TEST(FleetSize, Examples) {
  const std::vector<std::int64_t> three{1000, 1000, 1000}, half{500}, none{};
  EXPECT_EQ(fleet_size_guideline(three, 1000), (FleetSize{3, 3, 6}));
  EXPECT_EQ(fleet_size_guideline(half, 1000), (FleetSize{1, 1, 1}));
  EXPECT_EQ(fleet_size_guideline(none, 1000), (FleetSize{0, 0, 0}));
  EXPECT_THROW(fleet_size_guideline(three, 0), std::invalid_argument);
}

TEST(Energy, RetimeExamples) {
  EnergyParams e;
  e.capacity = 1000;
  e.min_level = 200;
  e.drain_per_tick = 1.0;
  e.charge_duration = 20;
  EXPECT_EQ(retime_for_energy(500, 500, e, 30), 500);
  EXPECT_EQ(retime_for_energy(1600, 0, e, 30), 1600 + 100);
  EXPECT_EQ(retime_for_energy(300, 0, e, 30), 300 + 50);
}

TEST(Energy, GcsRetime) {
  EnergyParams e;
  e.capacity = 1000;
  e.min_level = 200;
  e.drain_per_tick = 1.0;
  e.charge_duration = 20;
  EXPECT_EQ(gcs_retime_for_energy(400, 300, 900.0, e, 30), 400);
  EXPECT_EQ(gcs_retime_for_energy(400, 800, 900.0, e, 30), 400 + 50);
  EXPECT_GT(gcs_retime_for_energy(400, 2000, 900.0, e, 30), 400 + 50);
}

TEST(BBoxDistance, NearestCellOfBox) {
  const auto map = open_map({20, 6, 5});
  const auto field = distance_field(map, {1, 2, 2});
  const BBox box{0, {10, 1, 1}, {14, 4, 3}};
  EXPECT_EQ(bbox_distance(field, map.dims(), box), 9000);
}

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "slei/world.hpp"

using namespace slei;

namespace {

WorldGrid open_grid(int n) { return WorldGrid({n, n, n}, 1.0, true); }

LocalMap blank(const WorldGrid& g) { return LocalMap(0, g.dims(), g.resolution()); }

}  // namespace

TEST(WorldGrid, ShellIsOccupied) {
  const auto g = open_grid(6);
  EXPECT_TRUE(g.occupied({0, 3, 3}));
  EXPECT_TRUE(g.occupied({5, 5, 5}));
  EXPECT_FALSE(g.occupied({1, 1, 1}));
  EXPECT_TRUE(g.on_shell({0, 2, 2}));
  EXPECT_FALSE(g.on_shell({2, 2, 2}));
}

TEST(Raycast, OpenSpace) {
  const auto g = open_grid(10);
  EXPECT_TRUE(raycast_los(g, {1, 1, 1}, {8, 8, 1}));
  EXPECT_TRUE(raycast_los(g, {4, 4, 4}, {4, 4, 4}));
}

TEST(Raycast, WallBlocks) {
  auto g = open_grid(10);
  for (int y = 0; y < 10; ++y)
    for (int z = 0; z < 10; ++z) g.set_occupied({3, y, z}, true);
  EXPECT_FALSE(raycast_los(g, {1, 1, 1}, {5, 1, 1}));
}

TEST(Raycast, OutOfBoundsRejected) {
  const auto g = open_grid(5);
  EXPECT_THROW(raycast_los(g, {1, 1, 1}, {7, 1, 1}), std::out_of_range);
}

TEST(Raycast, SymmetricOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_grid({12, 12, 8}, 0.2, rng);
    std::uniform_int_distribution<int> px(0, 11), pz(0, 7);
    for (int k = 0; k < 200; ++k) {
      const Voxel a{px(rng), px(rng), pz(rng)}, b{px(rng), px(rng), pz(rng)};
      ASSERT_EQ(raycast_los(g, a, b), raycast_los(g, b, a)) << a << " " << b;
    }
  }
}

TEST(Sense, FullRangeThenIdempotent) {
  // 5^3 interior of a 7^3 grid, sensing from the middle
  const auto g = open_grid(7);
  auto m = blank(g);
  const auto first = sense(g, m, {3, 3, 3}, 10.0);
  EXPECT_EQ(first.size(), 7u * 7u * 7u);
  EXPECT_TRUE(sense(g, m, {3, 3, 3}, 10.0).empty());
}

TEST(Sense, WallOccludes) {
  auto g = open_grid(9);
  for (int y = 0; y < 9; ++y)
    for (int z = 0; z < 9; ++z) g.set_occupied({4, y, z}, true);
  auto m = blank(g);
  sense(g, m, {3, 4, 4}, 4.0);
  EXPECT_EQ(m.at({4, 4, 4}), Cell::Occupied);
  EXPECT_EQ(m.at({5, 4, 4}), Cell::Unknown);
  EXPECT_EQ(m.at({6, 4, 4}), Cell::Unknown);
}

TEST(Sense, SubVoxelRangeSeesOnlyPose) {
  const auto g = open_grid(5);
  auto m = blank(g);
  const auto seen = sense(g, m, {2, 2, 2}, 0.5);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], (Voxel{2, 2, 2}));
}

TEST(Sense, AgreesWithTruthAndUnknownNeverGrows) {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_grid({14, 14, 6}, 0.15, rng);
  auto m = blank(g);
  auto unknown = m.unknown_count();
  std::uniform_int_distribution<int> p(1, 12), pz(1, 4);
  for (int k = 0; k < 60; ++k) {
    const Voxel pose{p(rng), p(rng), pz(rng)};
    if (g.occupied(pose)) continue;
    sense(g, m, pose, 3.0);
    ASSERT_LE(m.unknown_count(), unknown);
    unknown = m.unknown_count();
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Voxel v = m.dims().voxel(i);
    if (m.known(v)) ASSERT_EQ(m.at(v), g.cell(v)) << v;
  }
}

TEST(ExploredVolume, MonotoneAndBounded) {
  std::mt19937_64 rng(8);
  const auto g = oracle::random_grid({12, 12, 6}, 0.1, rng);
  auto m = blank(g);
  BBox box{0, {2, 2, 1}, {8, 8, 4}};
  m.track(box);
  std::int64_t last = 0;
  std::uniform_int_distribution<int> p(1, 10), pz(1, 4);
  for (int k = 0; k < 40; ++k) {
    const Voxel pose{p(rng), p(rng), pz(rng)};
    if (g.occupied(pose)) continue;
    sense(g, m, pose, 2.5);
    ASSERT_GE(m.explored_volume(0), last);
    last = m.explored_volume(0);
  }
  EXPECT_LE(last, box.volume());
}

TEST(Frontiers, UnknownAndFreeBoxesHaveNone) {
  const auto g = open_grid(8);
  auto m = blank(g);
  const BBox box{0, {1, 1, 1}, {6, 6, 6}};
  EXPECT_TRUE(frontiers(m, box).empty());
  box.for_each([&](const Voxel& v) { m.observe(v, Cell::Free); });
  EXPECT_TRUE(frontiers(m, box).empty());
}

TEST(Frontiers, HalfExploredSlab) {
  const auto g = open_grid(8);
  auto m = blank(g);
  const BBox box{0, {1, 1, 1}, {6, 6, 6}};
  box.for_each([&](const Voxel& v) {
    if (v.x <= 3) m.observe(v, Cell::Free);
  });
  std::vector<Voxel> expect;
  for (int y = 1; y <= 6; ++y)
    for (int z = 1; z <= 6; ++z) expect.push_back({3, y, z});
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(frontiers(m, box), expect);
}

TEST(Frontiers, MatchesScanOnPartialMaps) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_grid({16, 16, 8}, 0.12, rng);
    auto m = blank(g);
    std::uniform_int_distribution<int> p(1, 14), pz(1, 6);
    for (int k = 0; k < 4; ++k) {
      const Voxel pose{p(rng), p(rng), pz(rng)};
      if (!g.occupied(pose)) sense(g, m, pose, 3.0);
    }
    const BBox box{0, {2, 2, 1}, {13, 12, 6}};
    auto got = frontiers(m, box);
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, oracle::frontier_scan(m, box)) << "trial " << trial;
  }
}

TEST(Astar, TrivialCases) {
  const auto g = open_grid(10);
  const auto m = oracle::full_map(g);
  const auto same = astar_path(m, {2, 2, 2}, {2, 2, 2}, 1.0);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->duration, 0);
  EXPECT_EQ(same->length_units, 0);
  // straight corridor of 6 cells
  const auto line = astar_path(m, {1, 1, 1}, {6, 1, 1}, 1.0);
  ASSERT_TRUE(line);
  EXPECT_EQ(line->duration, 5);
  const auto slow = astar_path(m, {1, 1, 1}, {6, 1, 1}, 2.0);
  EXPECT_EQ(slow->duration, 3);  // ceil(5 / 2)
}

TEST(Astar, SealedGoalUnreachable) {
  auto g = open_grid(10);
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx || dy || dz) g.set_occupied({5 + dx, 5 + dy, 5 + dz}, true);
  EXPECT_FALSE(astar_path(oracle::full_map(g), {1, 1, 1}, {5, 5, 5}, 1.0));
}

TEST(Astar, OptimalAgainstBellmanFord) {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto g = oracle::random_grid({10, 10, 8}, 0.25, rng);
    const auto m = oracle::full_map(g);
    const auto cells = oracle::free_cells(m);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    const Voxel a = cells[pick(rng)], b = cells[pick(rng)];
    const auto ref = oracle::shortest_units(m, a, b);
    const auto got = astar_path(m, a, b, 1.0);
    if (ref < 0) {
      EXPECT_FALSE(got) << a << " " << b;
      continue;
    }
    ASSERT_TRUE(got) << a << " " << b;
    EXPECT_EQ(got->length_units, ref);
    for (std::size_t i = 1; i < got->cells.size(); ++i) {
      ASSERT_EQ(chebyshev(got->cells[i], got->cells[i - 1]), 1);
      ASSERT_FALSE(m.occupied(got->cells[i]));
    }
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Astar, UnknownIsTraversable) {
  const auto g = open_grid(8);
  auto m = blank(g);
  m.seed_shell();
  EXPECT_TRUE(astar_path(m, {1, 1, 1}, {6, 6, 6}, 1.0));
}

TEST(DistanceField, AgreesWithAstar) {
  std::mt19937_64 rng(3);
  const auto g = oracle::random_grid({10, 10, 6}, 0.2, rng);
  const auto m = oracle::full_map(g);
  const auto cells = oracle::free_cells(m);
  const Voxel src = cells.front();
  const auto field = distance_field(m, src);
  for (std::size_t k = 0; k < cells.size(); k += 7) {
    const auto p = astar_path(m, src, cells[k], 1.0);
    ASSERT_EQ(field[m.dims().index(cells[k])], p ? p->length_units : -1);
  }
}

TEST(FitFeatures, OcclusionRangeAndSelf) {
  auto g = open_grid(12);
  for (int y = 0; y < 12; ++y)
    for (int z = 0; z < 12; ++z) g.set_occupied({6, y, z}, true);
  std::vector<Feature> fs(3);
  fs[0] = {0, {8, 5, 5}};   // behind the wall
  fs[1] = {1, {3, 5, 5}};   // in range
  fs[2] = {2, {5, 10, 5}};  // too far
  const auto got = fit_features(g, fs, {3, 5, 5}, 3.0);
  EXPECT_EQ(got, std::vector<FeatureId>{1});
  EXPECT_EQ(fs[0].status, FeatureStatus::Undiscovered);
  EXPECT_EQ(fs[1].status, FeatureStatus::Fitted);
  EXPECT_TRUE(fit_features(g, fs, {3, 5, 5}, 3.0).empty());
}

TEST(FeatureStatus, OnlyForward) {
  Feature f;
  advance_status(f, FeatureStatus::Fitted);
  advance_status(f, FeatureStatus::Assigned);
  EXPECT_THROW(advance_status(f, FeatureStatus::Fitted), std::logic_error);
  advance_status(f, FeatureStatus::Inspected);
  advance_status(f, FeatureStatus::Collected);
  EXPECT_EQ(f.status, FeatureStatus::Collected);
}

TEST(BBoxFromFootprint, Extrusion) {
  const Dims w{20, 20, 10};
  const auto b = bbox_from_footprint({2, 2, 5, 5}, 0, 6, 1, w);
  EXPECT_EQ(b.min_corner, (Voxel{2, 2, 0}));
  EXPECT_EQ(b.max_corner, (Voxel{5, 5, 7}));
  EXPECT_EQ(b.extent().z, 8);
  const auto exact = bbox_from_footprint({2, 2, 5, 5}, 2, 6, 0, w);
  EXPECT_EQ(exact.extent().z, 5);
  EXPECT_EQ(exact.volume(), 4 * 4 * 5);
}

TEST(BBoxFromFootprint, ClampedAtWorldEdge) {
  const auto b = bbox_from_footprint({15, 15, 24, 24}, 2, 8, 2, {20, 20, 10});
  EXPECT_EQ(b.max_corner, (Voxel{19, 19, 9}));
  EXPECT_EQ(b.volume(), 5 * 5 * 10);
}

TEST(BBoxFromFootprint, Rejects) {
  EXPECT_THROW(bbox_from_footprint({3, 3, 2, 2}, 0, 4, 1, {10, 10, 10}), std::invalid_argument);
  EXPECT_THROW(bbox_from_footprint({1, 1, 2, 2}, 0, 4, 5, {10, 10, 10}), std::invalid_argument);
}

TEST(Octree, EmptyInput) { EXPECT_TRUE(octree_partition({}, 4.0, 1.0).empty()); }

TEST(Octree, SmallCubeIsOneBox) {
  std::vector<Voxel> pts;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) pts.push_back({x, y, z});
  const auto boxes = octree_partition(pts, 4.0, 1.0);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes[0].volume(), 64);
}

TEST(Octree, OneExploredOctantLeavesSeven) {
  // 8^3 cube, min_dim 4: one level of octants, the explored one is dropped
  std::vector<Voxel> pts;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      for (int z = 0; z < 8; ++z)
        if (x >= 4 || y >= 4 || z >= 4) pts.push_back({x, y, z});
  const auto boxes = octree_partition(pts, 4.0, 1.0);
  EXPECT_EQ(boxes.size(), 7u);
  for (const auto& b : boxes) EXPECT_EQ(b.volume(), 64);
}

TEST(Octree, CoversAndDisjointOnRandomSets) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> c(0, 15), cz(0, 7);
    std::set<Voxel> s;
    const int n = 20 + trial * 10;
    for (int k = 0; k < n; ++k) s.insert({c(rng), c(rng), cz(rng)});
    const std::vector<Voxel> pts(s.begin(), s.end());
    const auto boxes = octree_partition(pts, 2.0, 1.0);
    for (const auto& p : pts) {
      int hits = 0;
      for (const auto& b : boxes) hits += b.contains(p);
      ASSERT_EQ(hits, 1) << p;
    }
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        const auto& a = boxes[i];
        const auto& b = boxes[j];
        const bool overlap = a.min_corner.x <= b.max_corner.x && b.min_corner.x <= a.max_corner.x &&
                             a.min_corner.y <= b.max_corner.y && b.min_corner.y <= a.max_corner.y &&
                             a.min_corner.z <= b.max_corner.z && b.min_corner.z <= a.max_corner.z;
        ASSERT_FALSE(overlap);
      }
  }
}

TEST(HaltCell, FreeTargetUnchangedOccupiedNudged) {
  auto g = open_grid(8);
  g.set_occupied({4, 4, 4}, true);
  const auto m = oracle::full_map(g);
  EXPECT_EQ(*halt_cell(m, {3, 3, 3}), (Voxel{3, 3, 3}));
  const auto h = halt_cell(m, {4, 4, 4});
  ASSERT_TRUE(h);
  EXPECT_EQ(chebyshev(*h, {4, 4, 4}), 1);
  EXPECT_EQ(squared_distance(*h, {4, 4, 4}), 1);
  EXPECT_EQ(*h, (Voxel{3, 4, 4}));
}

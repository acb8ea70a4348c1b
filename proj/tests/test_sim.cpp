#include <gtest/gtest.h>

#include <map>
#include <set>

#include "slei/scenario.hpp"
#include "slei/sim.hpp"

using namespace slei;
using nlohmann::json;

namespace {

SimConfig small(std::uint64_t seed, Mode mode = Mode::Slei3d) {
  GenParams p;
  p.seed = seed;
  auto cfg = gen_scenario(p);
  cfg.mode = mode;
  return cfg;
}

std::vector<FeatureId> ids_of(const json& j) {
  std::vector<FeatureId> out;
  if (j.is_array())
    for (const auto& v : j) out.push_back(v.get<FeatureId>());
  return out;
}

RobotId first_of(const SimConfig& cfg, Role role) {
  for (const auto& r : cfg.robots)
    if (r.role == role) return r.id;
  return kNoRobot;
}

}  // namespace

TEST(Sim, SameSeedSameLog) {
  for (std::uint64_t seed : {1u, 4u}) {
    for (Mode m : {Mode::Slei3d, Mode::SleiFix}) {
      const auto a = Simulator(small(seed, m)).run();
      const auto b = Simulator(small(seed, m)).run();
      EXPECT_EQ(a.log.to_ndjson(), b.log.to_ndjson()) << seed;
    }
  }
}

TEST(Sim, DifferentSeedsDiffer) {
  EXPECT_NE(Simulator(small(1)).run().log.to_ndjson(), Simulator(small(2)).run().log.to_ndjson());
}

TEST(Sim, SafetyEveryTick) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto cfg = small(seed);
    Simulator sim(cfg);
    const auto& truth = cfg.world.truth;
    while (sim.step()) {
      std::set<Voxel> seen;
      for (const auto& r : sim.robots()) {
        if (r.status != RobotStatus::Active) continue;
        ASSERT_FALSE(truth.occupied(r.pose)) << "seed " << seed << " tick " << sim.now() << " robot " << r.spec.id;
        ASSERT_TRUE(seen.insert(r.pose).second) << "seed " << seed << " tick " << sim.now() << " robot " << r.spec.id;
      }
    }
  }
}

TEST(Sim, FinishesOnSmallWorlds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto res = Simulator(small(seed)).run();
    EXPECT_TRUE(res.metrics.finished) << seed;
    EXPECT_DOUBLE_EQ(res.metrics.finish_rate, 1.0) << seed;
    EXPECT_EQ(res.metrics.features_collected, res.metrics.features_total) << seed;
  }
}

TEST(Sim, EveryCollectedFeatureHasACausalChain) {
  for (std::uint64_t seed : {1u, 5u}) {
    const auto cfg = small(seed);
    const auto res = Simulator(cfg).run();
    std::map<RobotId, Role> role;
    for (const auto& r : cfg.robots) role[r.id] = r.role;
    std::map<FeatureId, Tick> fitted, assigned, collected, at_gcs;
    std::map<FeatureId, std::pair<Tick, RobotId>> inspected;
    std::map<FeatureId, std::set<RobotId>> holders;
    std::map<FeatureId, bool> proper_hop;  // reached the GCS from an explorer or in a chance encounter
    for (const auto& e : res.log.events()) {
      const auto& p = e.payload;
      if (e.kind == "fitted") {
        fitted.try_emplace(p["feature"].get<FeatureId>(), e.tick);
      } else if (e.kind == "handover") {
        for (auto f : ids_of(p["features"])) assigned.try_emplace(f, e.tick);
      } else if (e.kind == "inspected") {
        const auto f = p["feature"].get<FeatureId>();
        const RobotId who = std::stoi(e.actor.substr(e.actor.find(':') + 1));
        if (inspected.try_emplace(f, e.tick, who).second) holders[f].insert(who);
      } else if (e.kind == "exchange") {
        const RobotId a = p["a"], b = p["b"];
        auto pass = [&](RobotId from, RobotId to, const json& list) {
          for (auto f : ids_of(list)) {
            ASSERT_TRUE(holders[f].count(from)) << "seed " << seed << " feature " << f << " tick " << e.tick;
            holders[f].insert(to);
            if (role[to] == Role::Gcs && at_gcs.try_emplace(f, e.tick).second)
              proper_hop[f] = role[from] == Role::Explorer || p["kind"] == "spontaneous";
          }
        };
        if (p.contains("results_to_b")) pass(a, b, p["results_to_b"]);
        if (p.contains("results_to_a")) pass(b, a, p["results_to_a"]);
      } else if (e.kind == "collected") {
        collected.try_emplace(p["feature"].get<FeatureId>(), e.tick);
      }
    }
    ASSERT_EQ(static_cast<int>(collected.size()), res.metrics.features_collected) << seed;
    for (const auto& [f, t] : collected) {
      ASSERT_TRUE(fitted.count(f) && assigned.count(f) && inspected.count(f) && at_gcs.count(f)) << seed << " " << f;
      EXPECT_LE(fitted[f], assigned[f]) << f;
      EXPECT_LE(assigned[f], inspected[f].first) << f;
      EXPECT_EQ(role[inspected[f].second], Role::Inspector) << f;
      EXPECT_LE(inspected[f].first, at_gcs[f]) << f;
      EXPECT_LE(at_gcs[f], t) << f;
      EXPECT_TRUE(proper_hop[f]) << seed << " " << f;
    }
  }
}

TEST(Sim, AtMostOneScheduledExchangePerRobotPerTick) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto res = Simulator(small(seed)).run();
    std::map<std::pair<Tick, RobotId>, int> count;
    for (const auto& e : res.log.events()) {
      if (e.kind != "exchange") continue;
      ++count[{e.tick, e.payload["a"].get<RobotId>()}];
      ++count[{e.tick, e.payload["b"].get<RobotId>()}];
    }
    for (const auto& [k, n] : count) EXPECT_EQ(n, 1) << "seed " << seed << " tick " << k.first << " robot " << k.second;
  }
}

TEST(Sim, ExplorersPunctualForGcsMeetings) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto cfg = small(seed);
    const auto res = Simulator(cfg).run();
    for (const auto& m : res.metrics.meetings) {
      if (m.explorer_arrival == kNoTick) continue;
      EXPECT_LE(m.explorer_arrival, m.planned + cfg.protocol.delta) << "seed " << seed << " meeting " << m.id;
    }
  }
}

TEST(Sim, EnergyStaysPositive) {
  for (std::uint64_t seed : {1u, 2u}) {
    auto cfg = small(seed);
    cfg.energy.enabled = true;
    Simulator sim(cfg);
    while (sim.step())
      for (const auto& r : sim.robots())
        if (r.status != RobotStatus::Failed) ASSERT_GT(r.energy, 0.0) << "seed " << seed << " tick " << sim.now();
    const auto m = sim.metrics();
    EXPECT_TRUE(m.finished) << seed;
    EXPECT_TRUE(m.energy_positive);
    EXPECT_GT(m.min_energy_fraction, 0.0);
  }
}

TEST(Sim, ExplorerFailureIsRecovered) {
  auto cfg = small(3);
  const auto clean = Simulator(cfg).run();
  ASSERT_TRUE(clean.metrics.finished);
  cfg.failures.push_back({first_of(cfg, Role::Explorer), clean.metrics.finish_tick / 3});
  const auto res = Simulator(cfg).run();
  EXPECT_TRUE(res.metrics.finished);
  EXPECT_DOUBLE_EQ(res.metrics.finish_rate, 1.0);
  EXPECT_GT(res.metrics.finish_tick, clean.metrics.finish_tick);
  EXPECT_GE(res.log.count("failure"), 1u);
}

TEST(Sim, AllExplorersFailedIsIncomplete) {
  auto cfg = small(3);
  for (const auto& r : cfg.robots)
    if (r.role == Role::Explorer) cfg.failures.push_back({r.id, 5});
  cfg.tick_budget = 600;
  const auto res = Simulator(cfg).run();
  EXPECT_FALSE(res.metrics.finished);
  EXPECT_LT(res.metrics.finish_rate, 1.0);
}

TEST(Sim, FixedGcsNeverMoves) {
  const auto cfg = small(2, Mode::SleiFix);
  Simulator sim(cfg);
  const RobotId g = first_of(cfg, Role::Gcs);
  const Voxel home = sim.robot(g).pose;
  while (sim.step()) ASSERT_EQ(sim.robot(g).pose, home) << sim.now();
  EXPECT_TRUE(sim.metrics().finished);
}

TEST(Sim, PreModeAssignsEveryBoxUpFront) {
  const auto cfg = small(2, Mode::SleiPre);
  Simulator sim(cfg);
  std::set<BBoxId> planned;
  std::map<RobotId, std::vector<BBoxId>> order;
  for (const auto& [id, x] : sim.explorers()) {
    order[id] = x.pre_order;
    planned.insert(x.pre_order.begin(), x.pre_order.end());
  }
  EXPECT_EQ(planned.size(), cfg.world.bboxes.size());
  const auto res = sim.run();
  std::map<RobotId, std::vector<BBoxId>> got;
  for (const auto& e : res.log.events())
    if (e.kind == "assign") got[e.payload["explorer"].get<RobotId>()].push_back(e.payload["bbox"].get<BBoxId>());
  EXPECT_EQ(got, order);
}

TEST(Sim, EmptyWorldFinishesWhenBoxesComplete) {
  auto cfg = small(1);
  cfg.world.features.clear();
  const auto res = Simulator(cfg).run();
  EXPECT_TRUE(res.metrics.finished);
  EXPECT_EQ(res.log.count("bbox_complete"), cfg.world.bboxes.size());
}

TEST(Sim, InvalidConfigRejected) {
  auto cfg = small(1);
  cfg.robots.clear();
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_THROW(Simulator{cfg}, ConfigError);
}

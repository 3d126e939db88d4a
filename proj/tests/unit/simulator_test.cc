// Copyright 2026 The fleetreloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fleetreloc/simulator.h"

#include <cmath>
#include <random>

#include "fleetreloc/mpc.h"
#include "gtest/gtest.h"

namespace fleetreloc {
namespace {

// Zones on a line, lambda = |i - j| epochs, eta = 300 s per epoch.
Scenario LineScenario(int zones, std::vector<int> fleet, std::vector<TripRecord> trips = {},
                      int epochs = 4) {
  Scenario s;
  s.name = "line";
  s.zones.count = zones;
  for (int z = 0; z < zones; ++z) s.zones.centroids.push_back({z * 1000.0, 0.0});
  s.travel_epochs = Matrix<int>(zones, zones, 1);
  s.travel_seconds = Matrix<double>(zones, zones, 0.0);
  for (int i = 0; i < zones; ++i)
    for (int j = 0; j < zones; ++j)
      if (i != j) {
        s.travel_epochs(i, j) = std::abs(i - j);
        s.travel_seconds(i, j) = 300.0 * std::abs(i - j);
      }
  s.initial_fleet = std::move(fleet);
  s.trips = std::move(trips);
  s.episode_epochs = epochs;
  return s;
}

int CountStatus(const Simulator& sim, VehicleStatus st) {
  int n = 0;
  for (const Vehicle& v : sim.vehicles()) n += v.status == st;
  return n;
}

TEST(Dispatch, MatchesCoLocatedRiderAndSchedulesArrival) {
  const Scenario s = LineScenario(3, {1, 0, 0}, {{0.0, 0, 2, 1}});
  Simulator sim(s, {});
  sim.Advance(0);
  EXPECT_EQ(sim.Dispatch(), 1);
  const Vehicle& v = sim.vehicles()[0];
  EXPECT_EQ(v.status, VehicleStatus::kServing);
  EXPECT_EQ(v.zone, 2);
  EXPECT_EQ(v.arrival_tick, 2 * 10);
  EXPECT_EQ(*sim.riders()[0].pickup_tick, 0);
  sim.Advance(19);
  EXPECT_EQ(sim.vehicles()[0].status, VehicleStatus::kServing);
  sim.Advance(20);
  EXPECT_EQ(sim.vehicles()[0].status, VehicleStatus::kIdle);
  EXPECT_EQ(sim.vehicles()[0].zone, 2);
}

TEST(Dispatch, NoIdleVehicleNoAssignment) {
  const Scenario s = LineScenario(2, {0, 1}, {{0.0, 0, 1, 1}});
  Simulator sim(s, {});
  sim.Advance(0);
  EXPECT_EQ(sim.Dispatch(), 0);
  EXPECT_TRUE(sim.riders()[0].waiting());
}

TEST(Dispatch, PoolsUpToCeilOfRatio) {
  const Scenario s = LineScenario(2, {1, 0}, {{0, 0, 1, 1}, {0, 0, 1, 1}, {0, 0, 1, 1}});
  Simulator sim(s, {});
  sim.Advance(0);
  EXPECT_EQ(sim.Dispatch(), 1);
  int served = 0;
  for (const RiderRequest& r : sim.riders()) served += r.pickup_tick.has_value();
  EXPECT_EQ(served, 2);
  EXPECT_TRUE(sim.riders()[2].waiting());
}

TEST(Dispatch, OldestRiderFirstAndLowestVehicleId) {
  const Scenario s = LineScenario(3, {2, 0, 0}, {{0, 0, 1, 1}, {30, 0, 2, 1}});
  SimConfig cfg;
  cfg.pooling_ratio = 1.0;
  Simulator sim(s, cfg);
  sim.Advance(0);
  sim.Advance(1);
  EXPECT_EQ(sim.Dispatch(), 2);
  EXPECT_EQ(sim.vehicles()[0].zone, 1);
  EXPECT_EQ(sim.vehicles()[1].zone, 2);
}

TEST(Dispatch, DifferentDestinationsDoNotPool) {
  const Scenario s = LineScenario(3, {1, 0, 0}, {{0, 0, 1, 1}, {0, 0, 2, 1}});
  Simulator sim(s, {});
  sim.Advance(0);
  EXPECT_EQ(sim.Dispatch(), 1);
  EXPECT_TRUE(sim.riders()[0].pickup_tick);
  EXPECT_TRUE(sim.riders()[1].waiting());
}

TEST(Dropout, RidersLeaveAfterMaxWait) {
  const Scenario s = LineScenario(2, {0, 1}, {{0, 0, 1, 1}});
  SimConfig cfg;
  cfg.max_wait_epochs = 1;
  Simulator sim(s, cfg);
  sim.Advance(0);
  sim.Advance(10);
  EXPECT_TRUE(sim.riders()[0].waiting());
  sim.Advance(11);
  EXPECT_EQ(sim.riders()[0].dropout_tick, 11);
  EXPECT_EQ(sim.metrics().dropped, 1);
}

TEST(EstimateSupply, IdleVehiclesCountInFirstEpoch) {
  const Scenario s = LineScenario(3, {2, 0, 3});
  Simulator sim(s, {});
  sim.Advance(0);
  const Matrix<int> v = sim.EstimateSupply(4);
  EXPECT_EQ(v(0, 0), 2);
  EXPECT_EQ(v(2, 0), 3);
  for (int i = 0; i < 3; ++i)
    for (int t = 1; t < 4; ++t) EXPECT_EQ(v(i, t), 0);
}

TEST(EstimateSupply, ArrivalInSevenMinutesCountsInSecondEpoch) {
  const Scenario s = LineScenario(3, {1, 0, 0}, {{0, 0, 2, 1}});
  Simulator sim(s, {});
  sim.Advance(0);
  sim.Dispatch();        // arrives at tick 20
  sim.Advance(6);        // 14 ticks = 7 min left
  const Matrix<int> v = sim.EstimateSupply(3);
  EXPECT_EQ(v(2, 1), 1);
  int total = 0;
  for (int x : v.data()) total += x;
  EXPECT_EQ(total, 1);
  // Beyond the horizon the vehicle is not counted.
  EXPECT_EQ(sim.EstimateSupply(1)(2, 0), 0);
}

TEST(ApplyRelocations, ZeroPlanLeavesStateUnchanged) {
  const Scenario s = LineScenario(2, {5, 0});
  Simulator sim(s, {});
  sim.Advance(0);
  EXPECT_EQ(sim.ApplyRelocations(RelocationPlan(2)), 0);
  EXPECT_EQ(sim.idle_count(), 5);
  EXPECT_EQ(sim.metrics().relocations, 0);
}

TEST(ApplyRelocations, MovesLowestIdsAndAccumulatesTime) {
  const Scenario s = LineScenario(3, {5, 0, 0});
  Simulator sim(s, {});
  sim.Advance(0);
  RelocationPlan plan(3);
  plan.flows(0, 1) = 2;
  EXPECT_EQ(sim.ApplyRelocations(plan), 2);
  EXPECT_EQ(sim.idle_count(), 3);
  EXPECT_EQ(sim.vehicles()[0].status, VehicleStatus::kRelocating);
  EXPECT_EQ(sim.vehicles()[1].status, VehicleStatus::kRelocating);
  EXPECT_EQ(sim.vehicles()[2].status, VehicleStatus::kIdle);
  EXPECT_EQ(sim.vehicles()[0].arrival_tick, 10);
  EXPECT_EQ(sim.metrics().relocations, 2);
  EXPECT_DOUBLE_EQ(sim.metrics().relocation_seconds, 600.0);
}

TEST(ApplyRelocations, ClipsToIdleVehicles) {
  const Scenario s = LineScenario(2, {5, 0});
  Simulator sim(s, {});
  sim.Advance(0);
  RelocationPlan plan(2);
  plan.flows(0, 1) = 7;
  EXPECT_EQ(sim.ApplyRelocations(plan), 5);
  EXPECT_EQ(sim.idle_count(), 0);
  EXPECT_EQ(sim.metrics().relocations, 5);
}

TEST(RunEpisode, EmptyStreamServesNothing) {
  const Scenario s = LineScenario(3, {2, 2, 2});
  for (const Policy& p : {Policy::Dispatcher(), Policy::Mpc(2)}) {
    const EpisodeMetrics m = run_episode(s, p, {});
    EXPECT_EQ(m.served, 0);
    EXPECT_EQ(m.relocations, 0);
    EXPECT_EQ(m.waiting_avg, 0.0);
    EXPECT_EQ(m.epochs.size(), 4u);
  }
}

TEST(RunEpisode, CoLocatedRiderWaitsAtMostOneTick) {
  const Scenario s = LineScenario(2, {1, 0}, {{95.0, 0, 1, 1}});
  const EpisodeMetrics m = run_episode(s, Policy::Dispatcher(), {});
  EXPECT_EQ(m.served, 1);
  EXPECT_LE(m.waiting_avg, 0.5);
}

TEST(RunEpisode, DecisionsOncePerEpochAndEpochRecordsAddUp) {
  SyntheticConfig sc;
  sc.episode_epochs = 6;
  const Scenario s = make_synthetic_scenario(sc);
  const EpisodeMetrics m = run_episode(s, Policy::Mpc(2), {});
  EXPECT_EQ(m.decisions, 6);
  int served = 0, dropped = 0, reloc = 0;
  for (const EpochRecord& e : m.epochs) {
    served += e.served;
    dropped += e.dropped;
    reloc += e.relocations;
  }
  EXPECT_EQ(served, m.served);
  EXPECT_EQ(dropped, m.dropped);
  EXPECT_EQ(reloc, m.relocations);
  EXPECT_EQ(m.served + m.dropped + m.waiting, m.arrivals);
}

TEST(RunEpisode, RelocationLowersWaitOnImbalancedDemand) {
  SyntheticConfig sc;
  sc.episode_epochs = 8;
  sc.background_riders_per_epoch = 4.0;
  const Scenario s = make_synthetic_scenario(sc);
  SimConfig cfg;
  cfg.milp.node_limit = 200;
  const EpisodeMetrics disp = run_episode(s, Policy::Dispatcher(), cfg);
  const EpisodeMetrics mpc = run_episode(s, Policy::Mpc(6), cfg);
  EXPECT_GT(disp.served, 0);
  EXPECT_LT(mpc.waiting_avg, disp.waiting_avg);
  EXPECT_GT(mpc.relocations, 0);
}

TEST(RunEpisode, Deterministic) {
  SyntheticConfig sc;
  sc.episode_epochs = 6;
  const Scenario s = make_synthetic_scenario(sc);
  SimConfig cfg;
  cfg.seed = 17;
  const EpisodeMetrics a = run_episode(s, Policy::Mpc(2), cfg);
  const EpisodeMetrics b = run_episode(s, Policy::Mpc(2), cfg);
  EXPECT_EQ(metrics_to_json(a, false).dump(), metrics_to_json(b, false).dump());
}

// Steps a simulator with random relocations and checks the accounting after
// every tick.
TEST(SimulatorProperty, ConservationAndAccountingEveryTick) {
  SyntheticConfig sc;
  sc.episode_epochs = 8;
  sc.hot_riders_per_epoch = 40;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sc.seed = seed;
    const Scenario s = make_synthetic_scenario(sc);
    SimConfig cfg;
    Simulator sim(s, cfg);
    std::mt19937_64 rng(seed);
    const long max_wait = cfg.max_wait_epochs * cfg.ticks_per_epoch;
    for (long tick = 0; tick < 80; ++tick) {
      sim.Advance(tick);
      sim.Dispatch();
      if (tick % 10 == 0) {
        RelocationPlan plan(s.zone_count());
        for (int k = 0; k < 6; ++k) {
          const int i = static_cast<int>(rng() % s.zone_count());
          const int j = static_cast<int>(rng() % s.zone_count());
          if (i != j) plan.flows(i, j) += static_cast<int>(rng() % 4);
        }
        sim.ApplyRelocations(plan);
        int supply = 0;
        for (int x : sim.EstimateSupply(6).data()) supply += x;
        ASSERT_LE(supply, s.fleet_size());
      }
      ASSERT_EQ(CountStatus(sim, VehicleStatus::kIdle) + CountStatus(sim, VehicleStatus::kServing) +
                    CountStatus(sim, VehicleStatus::kRelocating),
                s.fleet_size());
      int waiting = 0;
      for (const RiderRequest& r : sim.riders()) {
        waiting += r.waiting();
        ASSERT_LE(r.pickup_tick.has_value() + r.dropout_tick.has_value(), 1);
        if (r.pickup_tick) ASSERT_LE(*r.pickup_tick - r.arrival_tick, max_wait);
      }
      for (const Vehicle& v : sim.vehicles())
        if (v.status != VehicleStatus::kIdle) ASSERT_GT(v.arrival_tick, tick);
      ASSERT_EQ(sim.metrics().served + sim.metrics().dropped + waiting, sim.metrics().arrivals);
    }
  }
}

TEST(Harvest, OnePairPerDecisionWithBalancedLabels) {
  SyntheticConfig sc;
  sc.episode_epochs = 5;
  const Scenario s = make_synthetic_scenario(sc);
  std::vector<TrainingPair> pairs;
  const EpisodeMetrics m = run_episode(s, Policy::Mpc(2), {}, &pairs, 7);
  ASSERT_EQ(pairs.size(), 5u);
  const int z = s.zone_count();
  for (const TrainingPair& p : pairs) {
    EXPECT_EQ(p.group, 7);
    EXPECT_EQ(p.input.size(), static_cast<std::size_t>(z * 2 + z * z * 2));
    ASSERT_EQ(p.label.size(), static_cast<std::size_t>(2 * z));
    double in = 0, out = 0;
    for (int i = 0; i < z; ++i) {
      in += p.label[i];
      out += p.label[z + i];
      EXPECT_GE(p.label[i], 0.0);
      EXPECT_LE(p.label[z + i], p.input[i * 2]);  // y^o_i <= V_i1
    }
    EXPECT_EQ(in, out);
  }
  EXPECT_EQ(m.solver_failures, 0);
}

TEST(Harvest, TimedOutDecisionsAreExcluded) {
  SyntheticConfig sc;
  sc.episode_epochs = 3;
  const Scenario s = make_synthetic_scenario(sc);
  SimConfig cfg;
  cfg.milp.time_limit_s = 0.0;
  std::vector<TrainingPair> pairs;
  const EpisodeMetrics m = run_episode(s, Policy::Mpc(2), cfg, &pairs);
  EXPECT_TRUE(pairs.empty());
  EXPECT_EQ(m.solver_failures, 3);
  EXPECT_EQ(m.relocations, 0);
}

TEST(Harvest, PairsRoundTripThroughJsonLines) {
  std::vector<TrainingPair> pairs{{{1, 2.5, 0}, {0, 1, 1, 0}, 3, 4}, {{0}, {0, 0}, 0, 0}};
  const auto path = std::filesystem::temp_directory_path() / "fleetreloc_pairs_test.jsonl";
  write_pairs(path, pairs);
  const std::vector<TrainingPair> back = read_pairs(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].input, pairs[0].input);
  EXPECT_EQ(back[0].label, pairs[0].label);
  EXPECT_EQ(back[0].group, 3);
  EXPECT_EQ(back[0].epoch, 4);
}

TEST(SimConfig, RejectsBadFields) {
  SimConfig cfg;
  cfg.ticks_per_epoch = 0;
  EXPECT_THROW(validate_config(cfg), Error);
  cfg = SimConfig{};
  cfg.pooling_ratio = 0;
  try {
    validate_config(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("pooling_ratio"), std::string::npos);
  }
  EXPECT_EQ(SimConfig{}.pooling_cap(), 2);
}

}  // namespace
}  // namespace fleetreloc

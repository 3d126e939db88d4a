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


#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "benchmark/benchmark.h"
#include "fleetreloc/dataio.h"
#include "fleetreloc/milp.h"
#include "fleetreloc/mpc.h"
#include "fleetreloc/neural.h"
#include "fleetreloc/policy.h"
#include "fleetreloc/transport.h"

namespace fleetreloc {
namespace {

// Random supply, demand and travel times; vehicles and riders spread uniformly.
MpcInstance RandomInstance(int zones, int epochs, int vehicles, int riders, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HorizonConfig h;
  h.epochs = epochs;
  h.max_wait_epochs = std::min(3, epochs);
  MpcInstance inst = make_empty_instance(zones, h);
  std::uniform_int_distribution<int> zone(0, zones - 1);
  std::uniform_int_distribution<int> t(0, epochs - 1);
  std::uniform_int_distribution<int> secs(60, 1800);
  for (int v = 0; v < vehicles; ++v) ++inst.supply(zone(rng), t(rng));
  for (int r = 0; r < riders; ++r) ++inst.demand(zone(rng), zone(rng), t(rng));
  for (int i = 0; i < zones; ++i)
    for (int j = 0; j < zones; ++j) {
      inst.travel_seconds(i, j) = i == j ? 0.0 : secs(rng);
      inst.travel_epochs(i, j) =
          std::max(1, static_cast<int>(std::ceil(inst.travel_seconds(i, j) / 300.0)));
    }
  return inst;
}

void BM_Transportation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int total = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> zone(0, n - 1);
  TransportProblem p;
  p.supply.assign(n, 0);
  p.demand.assign(n, 0);
  for (int u = 0; u < total; ++u) {
    ++p.supply[zone(rng)];
    ++p.demand[zone(rng)];
  }
  p.cost = Matrix<double>(n, n);
  std::uniform_int_distribution<int> secs(0, 1800);
  for (double& c : p.cost.data()) c = secs(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_transportation(p));
}
BENCHMARK(BM_Transportation)->Args({73, 100})->Args({73, 500})->Unit(benchmark::kMillisecond);

void BM_MpcRootLp(benchmark::State& state) {
  const MpcInstance inst =
      RandomInstance(10, static_cast<int>(state.range(0)), 100, 120, 2);
  const MpcModel model = build_model(inst);
  state.counters["columns"] = model.problem.num_vars();
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model.problem));
}
BENCHMARK(BM_MpcRootLp)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_MpcSolve(benchmark::State& state) {
  const MpcInstance inst =
      RandomInstance(10, static_cast<int>(state.range(0)), 100, 120, 3);
  MilpConfig cfg;
  cfg.node_limit = 200;
  for (auto _ : state) benchmark::DoNotOptimize(solve_mpc(inst, cfg));
}
BENCHMARK(BM_MpcSolve)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_MlpForward(benchmark::State& state) {
  const int zones = 73;
  const int epochs = 6;
  const int width = static_cast<int>(state.range(0));
  const int d_in = zones * epochs + zones * zones * epochs;
  const MlpModel m = make_mlp({d_in, width, width, 2 * zones}, 4);
  std::vector<double> x(d_in, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(forward(m, x));
}
BENCHMARK(BM_MlpForward)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LearnedDecide(benchmark::State& state) {
  const int zones = 73;
  const int epochs = static_cast<int>(state.range(0));
  const MpcInstance inst = RandomInstance(zones, epochs, 1000, 3000, 5);
  const int d_in = static_cast<int>(encode_input(inst).size());
  auto m = std::make_shared<MlpModel>(make_mlp({d_in, 64, 64, 2 * zones}, 6));
  for (double& b : m->layers.back().bias) b = 4.0;
  m->zones = zones;
  m->horizon = epochs;
  const Policy policy = Policy::Learned(m);
  for (auto _ : state) benchmark::DoNotOptimize(decide(policy, inst));
}
BENCHMARK(BM_LearnedDecide)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01(0.0, 1.0);
  Dataset d;
  for (int r = 0; r < 500; ++r) {
    std::vector<double> x(660);
    std::vector<double> y(20);
    for (double& v : x) v = std::max(0.0, std::round(n01(rng) + 1.0));
    for (double& v : y) v = std::max(0.0, std::round(n01(rng)));
    d.Add(x, y);
  }
  TrainConfig cfg;
  cfg.hidden = {32, 32};
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(d, Dataset{}, cfg, {}));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fleetreloc

BENCHMARK_MAIN();

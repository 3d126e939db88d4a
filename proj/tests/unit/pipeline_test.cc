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


#include "fleetreloc/pipeline.h"

#include <atomic>
#include <cmath>

#include "fleetreloc/parallel.h"
#include "gtest/gtest.h"

namespace fleetreloc {
namespace {

std::vector<Scenario> Bases(int n) {
  std::vector<Scenario> out;
  for (int s = 0; s < n; ++s) {
    SyntheticConfig sc;
    sc.seed = 40 + s;
    sc.episode_epochs = 4;
    out.push_back(make_synthetic_scenario(sc));
  }
  return out;
}

TEST(ParallelForTest, VisitsEveryIndexOnceAndRethrows) {
  for (int workers : {1, 4}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, workers, [&](int i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(10, workers, [](int i) { if (i == 3) throw Error("x"); }), Error);
  }
}

TEST(HarvestTest, WorkerCountDoesNotChangePairs) {
  HarvestConfig cfg;
  cfg.perturbations = 1;
  cfg.sim.milp.node_limit = 200;
  const std::vector<Scenario> bases = Bases(2);
  const HarvestResult a = harvest(bases, cfg, 1);
  const HarvestResult b = harvest(bases, cfg, 3);
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  EXPECT_EQ(a.decisions, 16);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    EXPECT_EQ(a.pairs[k].input, b.pairs[k].input);
    EXPECT_EQ(a.pairs[k].label, b.pairs[k].label);
    EXPECT_EQ(a.pairs[k].group, b.pairs[k].group);
  }
  EXPECT_EQ(a.pairs.front().group, 0);
  EXPECT_EQ(a.pairs.back().group, 1);
}

TEST(FitTest, SplitsByGroupAndReportsPerElementErrors) {
  HarvestConfig cfg;
  cfg.perturbations = 1;
  cfg.sim.milp.node_limit = 200;
  const Dataset data = to_dataset(harvest(Bases(3), cfg).pairs);
  FitConfig fc;
  fc.zones = 10;
  fc.horizon = 6;
  fc.split_ratio = 2;
  fc.train.hidden = {8, 8};
  fc.train.epochs = 20;
  const FitResult fit = fit_relocation_model(data, fc);
  EXPECT_EQ(fit.trained.model.zones, 10);
  EXPECT_EQ(fit.trained.model.horizon, 6);
  EXPECT_GT(fit.validation_set.size(), 0);
  EXPECT_LT(fit.validation_set.size(), data.size());
  const FidelityReport r = evaluate_fidelity(fit.trained.model, fit.validation_set, 1);
  EXPECT_EQ(r.samples, fit.validation_set.size());
  ASSERT_EQ(r.mae_restored.size(), 20u);
  EXPECT_GE(r.max_mae_restored(), 0.0);
  EXPECT_TRUE(std::isfinite(r.mse_restored));
  EXPECT_THROW(fit_relocation_model(Dataset{}, fc), TrainingError);
}

}  // namespace
}  // namespace fleetreloc

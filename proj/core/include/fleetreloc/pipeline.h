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

// Training-data harvesting, model fitting and validation error for the
// learned relocation policy.

#ifndef FLEETRELOC_PIPELINE_H_
#define FLEETRELOC_PIPELINE_H_

#include <cstdint>
#include <vector>

#include "fleetreloc/dataio.h"
#include "fleetreloc/neural.h"
#include "fleetreloc/simulator.h"

namespace fleetreloc {

struct HarvestConfig {
  int horizon = 6;
  int perturbations = 2;  // perturbed copies per base scenario
  double perturb_sigma_pct = 2.5;
  SimConfig sim;
};

struct HarvestResult {
  std::vector<TrainingPair> pairs;
  int decisions = 0;
  int timeouts = 0;  // decisions without an incumbent, excluded from pairs

  double timeout_rate() const { return decisions > 0 ? double(timeouts) / decisions : 0.0; }
};

// Runs Mpc(horizon) over every base scenario and its perturbed copies. The
// group id of a pair is the index of its base scenario, so copies of one base
// never straddle a train/validation split. Pairs come out in base, copy,
// epoch order for any worker count.
HarvestResult harvest(const std::vector<Scenario>& bases, const HarvestConfig& cfg,
                      int workers = 1);

Dataset to_dataset(const std::vector<TrainingPair>& pairs);

struct FitConfig {
  TrainConfig train;
  int split_ratio = 5;  // train:validation groups
  int zones = 0;
  int horizon = 0;
};

struct FitResult {
  TrainResult trained;
  Dataset train_set;       // after mean-sampling
  Dataset validation_set;
};

// Splits by group, mean-samples the training part, flags sparse elements and
// trains. Throws TrainingError on an empty dataset.
FitResult fit_relocation_model(const Dataset& data, const FitConfig& cfg);

struct FidelityReport {
  int samples = 0;
  double mse_raw = 0.0;       // network output vs label
  double mse_restored = 0.0;  // restored plan vs label
  std::vector<double> mae_raw;       // per label element
  std::vector<double> mae_restored;  // per label element
  double max_mae_raw() const;
  double max_mae_restored() const;
};

// Errors of the model on a labelled set; restoration uses the first-epoch
// supply encoded in each input.
FidelityReport evaluate_fidelity(const MlpModel& model, const Dataset& data, std::uint64_t seed);

}  // namespace fleetreloc

#endif  // FLEETRELOC_PIPELINE_H_

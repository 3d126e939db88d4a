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

#include <algorithm>
#include <cmath>

#include "fleetreloc/parallel.h"
#include "fleetreloc/policy.h"

namespace fleetreloc {

HarvestResult harvest(const std::vector<Scenario>& bases, const HarvestConfig& cfg, int workers) {
  const Policy policy = Policy::Mpc(cfg.horizon);
  const int copies = cfg.perturbations + 1;
  const int jobs = static_cast<int>(bases.size()) * copies;
  std::vector<std::vector<TrainingPair>> pairs(jobs);
  std::vector<EpisodeMetrics> metrics(jobs);
  parallel_for(jobs, workers, [&](int job) {
    const std::size_t b = static_cast<std::size_t>(job / copies);
    const int copy = job % copies;
    Scenario s = bases[b];
    SimConfig sim = cfg.sim;
    sim.seed = cfg.sim.seed * 1000003ULL + b * 101ULL + static_cast<std::uint64_t>(copy);
    if (copy > 0)
      s.trips = perturb_trips(s.trips, sim.seed, sim.tick_seconds, cfg.perturb_sigma_pct);
    metrics[job] = run_episode(s, policy, sim, &pairs[job], static_cast<int>(b));
  });
  HarvestResult out;
  for (int job = 0; job < jobs; ++job) {
    out.pairs.insert(out.pairs.end(), pairs[job].begin(), pairs[job].end());
    out.decisions += metrics[job].decisions;
    out.timeouts += metrics[job].solver_failures;
  }
  return out;
}

Dataset to_dataset(const std::vector<TrainingPair>& pairs) {
  Dataset d;
  for (const TrainingPair& p : pairs) d.Add(p.input, p.label, p.group);
  return d;
}

FitResult fit_relocation_model(const Dataset& data, const FitConfig& cfg) {
  if (data.size() == 0) throw TrainingError("empty training dataset");
  FitResult out;
  Dataset train_part;
  split_by_group(data, cfg.split_ratio, cfg.train.seed, &train_part, &out.validation_set);
  out.train_set = mean_sample(train_part, cfg.train.kappa, cfg.train.mu);
  const std::vector<bool> mask =
      flag_sparse_elements(out.train_set, cfg.train.zero_fraction_threshold);
  out.trained = train(out.train_set, out.validation_set, cfg.train, mask);
  out.trained.model.zones = cfg.zones;
  out.trained.model.horizon = cfg.horizon;
  return out;
}

double FidelityReport::max_mae_raw() const {
  return mae_raw.empty() ? 0.0 : *std::max_element(mae_raw.begin(), mae_raw.end());
}

double FidelityReport::max_mae_restored() const {
  return mae_restored.empty() ? 0.0 : *std::max_element(mae_restored.begin(), mae_restored.end());
}

FidelityReport evaluate_fidelity(const MlpModel& model, const Dataset& data, std::uint64_t seed) {
  const int nz = model.zones;
  const int nt = model.horizon;
  if (nz <= 0 || nt <= 0) throw Error("model lacks zone count or horizon");
  const int k = model.output_size();
  FidelityReport r;
  r.mae_raw.assign(k, 0.0);
  r.mae_restored.assign(k, 0.0);
  for (int s = 0; s < data.size(); ++s) {
    const std::vector<double>& x = data.inputs[s];
    const std::vector<double>& y = data.labels[s];
    const std::vector<double> raw = forward(model, x);
    std::vector<int> v1(nz);
    for (int i = 0; i < nz; ++i) v1[i] = static_cast<int>(std::lround(x[i * nt]));
    const AggregatedPlan restored =
        restore_feasibility(decode_output(raw), v1, seed + static_cast<std::uint64_t>(s));
    const std::vector<double> fixed = encode_label(restored);
    for (int e = 0; e < k; ++e) {
      const double d_raw = raw[e] - y[e];
      const double d_fix = fixed[e] - y[e];
      r.mse_raw += d_raw * d_raw;
      r.mse_restored += d_fix * d_fix;
      r.mae_raw[e] += std::abs(d_raw);
      r.mae_restored[e] += std::abs(d_fix);
    }
  }
  r.samples = data.size();
  if (r.samples > 0) {
    r.mse_raw /= static_cast<double>(r.samples) * k;
    r.mse_restored /= static_cast<double>(r.samples) * k;
    for (int e = 0; e < k; ++e) {
      r.mae_raw[e] /= r.samples;
      r.mae_restored[e] /= r.samples;
    }
  }
  return r;
}

}  // namespace fleetreloc

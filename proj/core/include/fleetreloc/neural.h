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

// Feed-forward regressor [d_in, h, h, d_out] with tanh hidden layers, trained
// by mini-batch Adam on a weighted squared error plus an l1 penalty.

#ifndef FLEETRELOC_NEURAL_H_
#define FLEETRELOC_NEURAL_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fleetreloc/domain.h"

namespace fleetreloc {

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Row-major out x in weights plus bias.
struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  bool operator==(const DenseLayer&) const = default;
};

struct MlpModel {
  static constexpr int kFormatVersion = 1;

  std::vector<DenseLayer> layers;
  // Inputs are standardized as (x - input_mean) / input_scale before the
  // first layer. Empty means identity.
  std::vector<double> input_mean;
  std::vector<double> input_scale;
  // Output elements weighted as long-tail during training.
  std::vector<bool> sparse_mask;
  // Instance shape the model was trained for; 0 when unknown.
  int zones = 0;
  int horizon = 0;

  int input_size() const { return layers.empty() ? 0 : layers.front().inputs; }
  int output_size() const { return layers.empty() ? 0 : layers.back().outputs; }
  std::vector<int> layer_sizes() const;
  int parameter_count() const;

  bool operator==(const MlpModel&) const = default;
};

// Glorot-uniform weights and zero biases; sizes = {d_in, h1, ..., d_out}.
MlpModel make_mlp(const std::vector<int>& sizes, std::uint64_t seed);

// Throws TrainingError on a dimension mismatch.
std::vector<double> forward(const MlpModel& m, std::span<const double> x);

// All parameters in layer order, each layer's weights then its bias.
std::vector<double> get_parameters(const MlpModel& m);
void set_parameters(MlpModel& m, std::span<const double> params);

struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> labels;
  // Source instance of each row; rows sharing a group stay on one side of a
  // train/validation split.
  std::vector<int> groups;

  int size() const { return static_cast<int>(inputs.size()); }
  void Add(std::vector<double> x, std::vector<double> y, int group = 0);
};

struct ElementWeighting {
  std::vector<bool> sparse_mask;  // empty: no element is flagged
  double tail_weight = 5.0;
};

// mean over rows of sum_k w_k (yhat_k - y_k)^2 / K  +  l1 * sum |params|,
// w_k = tail_weight when element k is flagged and y_k != 0, else 1.
double loss(const MlpModel& m, const Dataset& batch, const ElementWeighting& w,
            double l1);

// Same loss over the given rows, with its gradient in get_parameters order.
// The l1 subgradient at 0 is 0.
double loss_and_gradient(const MlpModel& m, const Dataset& data,
                         std::span<const int> rows, const ElementWeighting& w,
                         double l1, std::vector<double>* grad);

// Rows whose label mean is >= kappa appear mu times in total; originals keep
// their order and the extra copies are appended in order.
Dataset mean_sample(const Dataset& data, double kappa, int mu);

// Element k is flagged when the fraction of rows with label_k == 0 exceeds
// the threshold.
std::vector<bool> flag_sparse_elements(const Dataset& data, double zero_fraction_threshold);

// Whole groups go to validation until it holds about 1/(ratio+1) of them.
void split_by_group(const Dataset& data, int ratio, std::uint64_t seed,
                    Dataset* train, Dataset* validation);

struct TrainConfig {
  std::vector<int> hidden = {64, 64};
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double l1 = 1e-5;
  int epochs = 100;
  std::uint64_t seed = 1;
  double kappa = 4.0;
  int mu = 3;
  double tail_weight = 5.0;
  double zero_fraction_threshold = 0.9;
  bool standardize_inputs = true;
};

struct CurvePoint {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_loss = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  MlpModel model;
  std::vector<CurvePoint> curve;
};

// Mini-batch Adam from a seeded initialization. The sparse mask is stored in
// the model. Throws TrainingError on empty data or a non-finite loss.
TrainResult train(const Dataset& train_set, const Dataset& validation_set,
                  const TrainConfig& cfg, const std::vector<bool>& sparse_mask = {});

// Starts from an existing model instead of a fresh one.
TrainResult train_from(MlpModel init, const Dataset& train_set,
                       const Dataset& validation_set, const TrainConfig& cfg);

void write_training_curve(const std::filesystem::path& path,
                          const std::vector<CurvePoint>& curve);

// JSON container; doubles round-trip exactly. load_model throws LoadError.
void save_model(const std::filesystem::path& path, const MlpModel& m);
MlpModel load_model(const std::filesystem::path& path);
std::string model_to_string(const MlpModel& m);
MlpModel model_from_string(const std::string& text);

}  // namespace fleetreloc

#endif  // FLEETRELOC_NEURAL_H_

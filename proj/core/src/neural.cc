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

#include "fleetreloc/neural.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fleetreloc/instance_io.h"

namespace fleetreloc {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMajor>;
using ConstVector = Eigen::Map<const Eigen::VectorXd>;

ConstWeights Weights(const DenseLayer& l) {
  return ConstWeights(l.weights.data(), l.outputs, l.inputs);
}
ConstVector Bias(const DenseLayer& l) { return ConstVector(l.bias.data(), l.outputs); }

void CheckInputWidth(const MlpModel& m, std::size_t got) {
  if (m.layers.empty()) throw TrainingError("model has no layers");
  if (static_cast<int>(got) != m.input_size()) {
    throw TrainingError("input has " + std::to_string(got) + " features, model expects " +
                        std::to_string(m.input_size()));
  }
}

// Columns are examples.
Eigen::MatrixXd Standardize(const MlpModel& m, Eigen::MatrixXd x) {
  if (m.input_mean.empty()) return x;
  const ConstVector mean(m.input_mean.data(), x.rows());
  const ConstVector scale(m.input_scale.data(), x.rows());
  x.colwise() -= mean;
  x.array().colwise() /= scale.array();
  return x;
}

Eigen::MatrixXd Gather(const MlpModel& m, const std::vector<std::vector<double>>& rows,
                       std::span<const int> pick) {
  const int d = m.input_size();
  Eigen::MatrixXd x(d, static_cast<Eigen::Index>(pick.size()));
  for (std::size_t c = 0; c < pick.size(); ++c) {
    const auto& row = rows[pick[c]];
    CheckInputWidth(m, row.size());
    x.col(static_cast<Eigen::Index>(c)) = ConstVector(row.data(), d);
  }
  return x;
}

// Activations per layer: acts[0] is the standardized input, acts.back() the
// output.
std::vector<Eigen::MatrixXd> ForwardBatch(const MlpModel& m, Eigen::MatrixXd x) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(m.layers.size() + 1);
  acts.push_back(Standardize(m, std::move(x)));
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    Eigen::MatrixXd z = Weights(m.layers[l]) * acts.back();
    z.colwise() += Bias(m.layers[l]);
    if (l + 1 < m.layers.size()) z = z.array().tanh().matrix();
    acts.push_back(std::move(z));
  }
  return acts;
}

double L1Norm(const MlpModel& m) {
  double s = 0.0;
  for (const DenseLayer& l : m.layers) {
    for (double w : l.weights) s += std::abs(w);
    for (double b : l.bias) s += std::abs(b);
  }
  return s;
}

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Eigen::VectorXd ElementWeights(const ElementWeighting& w, const std::vector<double>& y) {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(y.size()));
  if (w.sparse_mask.empty()) return out;
  for (std::size_t k = 0; k < y.size(); ++k)
    if (w.sparse_mask[k] && y[k] != 0.0) out[static_cast<Eigen::Index>(k)] = w.tail_weight;
  return out;
}

double Evaluate(const MlpModel& m, const Dataset& data, const ElementWeighting& w,
                double l1) {
  if (data.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<int> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return loss_and_gradient(m, data, all, w, l1, nullptr);
}

}  // namespace

std::vector<int> MlpModel::layer_sizes() const {
  std::vector<int> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(layers.front().inputs);
  for (const DenseLayer& l : layers) sizes.push_back(l.outputs);
  return sizes;
}

int MlpModel::parameter_count() const {
  int n = 0;
  for (const DenseLayer& l : layers) n += l.outputs * (l.inputs + 1);
  return n;
}

MlpModel make_mlp(const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 2) throw TrainingError("an MLP needs at least input and output sizes");
  for (int s : sizes)
    if (s <= 0) throw TrainingError("layer sizes must be positive");
  std::mt19937_64 rng(seed);
  MlpModel m;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = sizes[l];
    layer.outputs = sizes[l + 1];
    const double limit = std::sqrt(6.0 / (layer.inputs + layer.outputs));
    std::uniform_real_distribution<double> u(-limit, limit);
    layer.weights.resize(static_cast<std::size_t>(layer.inputs) * layer.outputs);
    for (double& w : layer.weights) w = u(rng);
    layer.bias.assign(layer.outputs, 0.0);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::vector<double> forward(const MlpModel& m, std::span<const double> x) {
  CheckInputWidth(m, x.size());
  Eigen::MatrixXd in = ConstVector(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::MatrixXd out = ForwardBatch(m, std::move(in)).back();
  return std::vector<double>(out.data(), out.data() + out.size());
}

std::vector<double> get_parameters(const MlpModel& m) {
  std::vector<double> p;
  p.reserve(m.parameter_count());
  for (const DenseLayer& l : m.layers) {
    p.insert(p.end(), l.weights.begin(), l.weights.end());
    p.insert(p.end(), l.bias.begin(), l.bias.end());
  }
  return p;
}

void set_parameters(MlpModel& m, std::span<const double> params) {
  if (static_cast<int>(params.size()) != m.parameter_count())
    throw TrainingError("parameter vector has the wrong length");
  auto it = params.begin();
  for (DenseLayer& l : m.layers) {
    std::copy(it, it + l.weights.size(), l.weights.begin());
    it += l.weights.size();
    std::copy(it, it + l.bias.size(), l.bias.begin());
    it += l.bias.size();
  }
}

void Dataset::Add(std::vector<double> x, std::vector<double> y, int group) {
  inputs.push_back(std::move(x));
  labels.push_back(std::move(y));
  groups.push_back(group);
}

double loss(const MlpModel& m, const Dataset& batch, const ElementWeighting& w,
            double l1) {
  if (batch.size() == 0) return l1 * L1Norm(m);
  return Evaluate(m, batch, w, l1);
}

double loss_and_gradient(const MlpModel& m, const Dataset& data,
                         std::span<const int> rows, const ElementWeighting& w,
                         double l1, std::vector<double>* grad) {
  const int k = m.output_size();
  const auto n = static_cast<Eigen::Index>(rows.size());
  std::vector<Eigen::MatrixXd> acts = ForwardBatch(m, Gather(m, data.inputs, rows));

  Eigen::MatrixXd weights(k, n), residual(k, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::vector<double>& y = data.labels[rows[c]];
    if (static_cast<int>(y.size()) != k) throw TrainingError("label width mismatch");
    weights.col(c) = ElementWeights(w, y);
    residual.col(c) = acts.back().col(c) - ConstVector(y.data(), k);
  }
  const double scale = n > 0 ? 1.0 / (static_cast<double>(n) * k) : 0.0;
  const double data_term =
      (weights.array() * residual.array().square()).sum() * scale;
  const double value = data_term + l1 * L1Norm(m);
  if (grad == nullptr) return value;

  grad->assign(m.parameter_count(), 0.0);
  std::vector<std::size_t> offset(m.layers.size());
  std::size_t at = 0;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    offset[l] = at;
    at += m.layers[l].weights.size() + m.layers[l].bias.size();
  }

  Eigen::MatrixXd delta = (2.0 * scale) * (weights.array() * residual.array()).matrix();
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const DenseLayer& layer = m.layers[l];
    Eigen::Map<RowMajor> gw(grad->data() + offset[l], layer.outputs, layer.inputs);
    Eigen::Map<Eigen::VectorXd> gb(grad->data() + offset[l] + layer.weights.size(),
                                   layer.outputs);
    gw.noalias() = delta * acts[l].transpose();
    gb = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = Weights(layer).transpose() * delta;
      delta = (back.array() * (1.0 - acts[l].array().square())).matrix();
    }
  }
  if (l1 != 0.0) {
    const std::vector<double> p = get_parameters(m);
    for (std::size_t i = 0; i < p.size(); ++i) (*grad)[i] += l1 * Sign(p[i]);
  }
  return value;
}

Dataset mean_sample(const Dataset& data, double kappa, int mu) {
  if (mu < 1) throw TrainingError("mu must be at least 1");
  Dataset out = data;
  for (int r = 0; r < data.size(); ++r) {
    const auto& y = data.labels[r];
    if (y.empty()) continue;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    if (!(mean >= kappa)) continue;
    for (int c = 1; c < mu; ++c) out.Add(data.inputs[r], y, data.groups[r]);
  }
  return out;
}

std::vector<bool> flag_sparse_elements(const Dataset& data, double zero_fraction_threshold) {
  if (data.size() == 0) return {};
  const std::size_t k = data.labels.front().size();
  std::vector<bool> flags(k, false);
  for (std::size_t e = 0; e < k; ++e) {
    int zeros = 0;
    for (const auto& y : data.labels) zeros += y[e] == 0.0;
    flags[e] = static_cast<double>(zeros) / data.size() > zero_fraction_threshold;
  }
  return flags;
}

void split_by_group(const Dataset& data, int ratio, std::uint64_t seed, Dataset* train,
                    Dataset* validation) {
  std::vector<int> groups(data.groups.begin(), data.groups.end());
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);
  const std::size_t held =
      groups.size() < 2 ? 0
                        : std::max<std::size_t>(
                              1, static_cast<std::size_t>(std::lround(
                                     static_cast<double>(groups.size()) / (ratio + 1))));
  std::map<int, bool> held_out;
  for (std::size_t g = 0; g < groups.size(); ++g) held_out[groups[g]] = g < held;
  *train = Dataset();
  *validation = Dataset();
  for (int r = 0; r < data.size(); ++r) {
    Dataset* dst = held_out[data.groups[r]] ? validation : train;
    dst->Add(data.inputs[r], data.labels[r], data.groups[r]);
  }
}

TrainResult train(const Dataset& train_set, const Dataset& validation_set,
                  const TrainConfig& cfg, const std::vector<bool>& sparse_mask) {
  if (train_set.size() == 0) throw TrainingError("training set is empty");
  std::vector<int> sizes{static_cast<int>(train_set.inputs.front().size())};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(static_cast<int>(train_set.labels.front().size()));
  MlpModel m = make_mlp(sizes, cfg.seed);
  m.sparse_mask = sparse_mask;

  if (cfg.standardize_inputs) {
    const std::size_t d = sizes.front();
    m.input_mean.assign(d, 0.0);
    m.input_scale.assign(d, 0.0);
    for (const auto& x : train_set.inputs)
      for (std::size_t f = 0; f < d; ++f) m.input_mean[f] += x[f];
    for (double& v : m.input_mean) v /= train_set.size();
    for (const auto& x : train_set.inputs)
      for (std::size_t f = 0; f < d; ++f)
        m.input_scale[f] += (x[f] - m.input_mean[f]) * (x[f] - m.input_mean[f]);
    for (double& v : m.input_scale) {
      v = std::sqrt(v / train_set.size());
      if (v < 1e-12) v = 1.0;  // constant feature
    }
  }
  return train_from(std::move(m), train_set, validation_set, cfg);
}

TrainResult train_from(MlpModel m, const Dataset& train_set, const Dataset& validation_set,
                       const TrainConfig& cfg) {
  if (train_set.size() == 0) throw TrainingError("training set is empty");
  if (cfg.batch_size < 1 || cfg.epochs < 0) throw TrainingError("invalid batch size or epochs");
  const ElementWeighting weighting{m.sparse_mask, cfg.tail_weight};
  std::vector<double> theta = get_parameters(m);
  std::vector<double> first(theta.size(), 0.0), second(theta.size(), 0.0), grad;
  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  TrainResult result;
  long long step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::span<const int> batch(order.data() + start, end - start);
      const double value = loss_and_gradient(m, train_set, batch, weighting, cfg.l1, &grad);
      if (!std::isfinite(value)) {
        throw TrainingError("loss became non-finite in epoch " + std::to_string(epoch) +
                            " at batch starting " + std::to_string(start));
      }
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t i = 0; i < theta.size(); ++i) {
        first[i] = cfg.beta1 * first[i] + (1.0 - cfg.beta1) * grad[i];
        second[i] = cfg.beta2 * second[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        theta[i] -= cfg.learning_rate * (first[i] / c1) /
                    (std::sqrt(second[i] / c2) + cfg.epsilon);
      }
      set_parameters(m, theta);
    }
    CurvePoint point;
    point.epoch = epoch;
    point.train_loss = Evaluate(m, train_set, weighting, cfg.l1);
    point.validation_loss = Evaluate(m, validation_set, weighting, cfg.l1);
    if (!std::isfinite(point.train_loss))
      throw TrainingError("training loss became non-finite after epoch " + std::to_string(epoch));
    result.curve.push_back(point);
  }
  result.model = std::move(m);
  return result;
}

void write_training_curve(const std::filesystem::path& path,
                          const std::vector<CurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(10);
  out << "epoch,train_loss,val_loss\n";
  for (const CurvePoint& p : curve)
    out << p.epoch << ',' << p.train_loss << ',' << p.validation_loss << '\n';
}

std::string model_to_string(const MlpModel& m) {
  nlohmann::json doc;
  doc["format"] = "fleetreloc-mlp";
  doc["version"] = MlpModel::kFormatVersion;
  doc["layer_sizes"] = m.layer_sizes();
  doc["zones"] = m.zones;
  doc["horizon"] = m.horizon;
  doc["input_mean"] = m.input_mean;
  doc["input_scale"] = m.input_scale;
  doc["sparse_mask"] = m.sparse_mask;
  doc["activation"] = "tanh";
  nlohmann::json layers = nlohmann::json::array();
  for (const DenseLayer& l : m.layers) layers.push_back({{"weights", l.weights}, {"bias", l.bias}});
  doc["layers"] = std::move(layers);
  return doc.dump();
}

MlpModel model_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "fleetreloc-mlp")
      throw LoadError("not a fleetreloc model file");
    const int version = doc.at("version").get<int>();
    if (version != MlpModel::kFormatVersion) {
      throw LoadError("model file version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(MlpModel::kFormatVersion) + ")");
    }
    const auto sizes = doc.at("layer_sizes").get<std::vector<int>>();
    const auto& layers = doc.at("layers");
    if (sizes.size() < 2 || layers.size() != sizes.size() - 1)
      throw LoadError("layer_sizes does not match the stored layers");
    MlpModel m;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      DenseLayer layer;
      layer.inputs = sizes[l];
      layer.outputs = sizes[l + 1];
      layer.weights = layers[l].at("weights").get<std::vector<double>>();
      layer.bias = layers[l].at("bias").get<std::vector<double>>();
      if (layer.weights.size() != static_cast<std::size_t>(layer.inputs) * layer.outputs ||
          layer.bias.size() != static_cast<std::size_t>(layer.outputs))
        throw LoadError("layer " + std::to_string(l) + " has the wrong parameter count");
      m.layers.push_back(std::move(layer));
    }
    m.zones = doc.value("zones", 0);
    m.horizon = doc.value("horizon", 0);
    m.input_mean = doc.at("input_mean").get<std::vector<double>>();
    m.input_scale = doc.at("input_scale").get<std::vector<double>>();
    m.sparse_mask = doc.at("sparse_mask").get<std::vector<bool>>();
    if (m.input_mean.size() != m.input_scale.size() ||
        (!m.input_mean.empty() && static_cast<int>(m.input_mean.size()) != sizes.front()))
      throw LoadError("normalization statistics do not match the input size");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const MlpModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_string(m);
  if (!out) throw Error("failed writing " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

}  // namespace fleetreloc

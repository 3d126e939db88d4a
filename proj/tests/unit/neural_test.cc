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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "fleetreloc/instance_io.h"
#include "gtest/gtest.h"

namespace fleetreloc {
namespace {

// Independent straight-line evaluation of W3 tanh(W2 tanh(W1 x + b1) + b2) + b3.
std::vector<double> NaiveForward(const MlpModel& m, std::vector<double> x) {
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const DenseLayer& layer = m.layers[l];
    std::vector<double> y(layer.outputs);
    for (int o = 0; o < layer.outputs; ++o) {
      double acc = layer.bias[o];
      for (int i = 0; i < layer.inputs; ++i) acc += layer.weights[o * layer.inputs + i] * x[i];
      y[o] = l + 1 < m.layers.size() ? std::tanh(acc) : acc;
    }
    x = std::move(y);
  }
  return x;
}

std::vector<double> RandomVector(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& e : v) e = g(rng);
  return v;
}

Dataset RandomDataset(int rows, int d_in, int d_out, std::mt19937_64& rng) {
  Dataset data;
  std::bernoulli_distribution zero(0.4);
  for (int r = 0; r < rows; ++r) {
    std::vector<double> y = RandomVector(d_out, rng);
    for (double& v : y)
      if (zero(rng)) v = 0.0;
    data.Add(RandomVector(d_in, rng), std::move(y), r);
  }
  return data;
}

TEST(ForwardTest, ZeroModelGivesZeroOutput) {
  MlpModel m = make_mlp({4, 3, 3, 2}, 1);
  set_parameters(m, std::vector<double>(m.parameter_count(), 0.0));
  EXPECT_EQ(forward(m, std::vector<double>{1.0, -2.0, 3.0, 0.5}),
            (std::vector<double>{0.0, 0.0}));
}

TEST(ForwardTest, ZeroInputReturnsOutputBias) {
  MlpModel m = make_mlp({3, 4, 4, 2}, 2);
  m.layers[0].bias.assign(4, 0.0);
  m.layers[1].bias.assign(4, 0.0);
  m.layers[2].bias = {0.25, -1.5};
  EXPECT_EQ(forward(m, std::vector<double>(3, 0.0)), (std::vector<double>{0.25, -1.5}));
}

TEST(ForwardTest, MatchesNaiveImplementation) {
  std::mt19937_64 rng(3);
  MlpModel m = make_mlp({7, 5, 6, 3}, 3);
  set_parameters(m, RandomVector(m.parameter_count(), rng, 0.5));
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x = RandomVector(7, rng);
    const std::vector<double> a = forward(m, x);
    const std::vector<double> b = NaiveForward(m, x);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
  EXPECT_THROW(forward(m, std::vector<double>(6, 0.0)), TrainingError);
}

TEST(LossTest, PerfectPredictionIsZero) {
  std::mt19937_64 rng(4);
  MlpModel m = make_mlp({3, 4, 4, 2}, 4);
  Dataset d;
  for (int r = 0; r < 5; ++r) {
    std::vector<double> x = RandomVector(3, rng);
    d.Add(x, forward(m, x));
  }
  EXPECT_NEAR(loss(m, d, {}, 0.0), 0.0, 1e-24);
}

TEST(LossTest, SingleResidualAveragesOverElements) {
  // Output is exactly the bias; residual (1, 0, 0, 0) against |Z| = 2.
  MlpModel m = make_mlp({2, 3, 3, 4}, 5);
  set_parameters(m, std::vector<double>(m.parameter_count(), 0.0));
  m.layers.back().bias = {1.0, 0.0, 0.0, 0.0};
  Dataset d;
  d.Add({0.3, 0.7}, {0.0, 0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(loss(m, d, {}, 0.0), 1.0 / 4.0);
}

TEST(LossTest, FlaggedNonZeroElementWeighsFiveTimes) {
  MlpModel m = make_mlp({1, 2, 2, 2}, 6);
  set_parameters(m, std::vector<double>(m.parameter_count(), 0.0));
  Dataset d;
  d.Add({0.0}, {2.0, 2.0});
  const ElementWeighting w{{true, false}, 5.0};
  // (5 * 4 + 1 * 4) / 2
  EXPECT_DOUBLE_EQ(loss(m, d, w, 0.0), 12.0);
  Dataset zero_label;
  zero_label.Add({0.0}, {0.0, 2.0});
  m.layers.back().bias = {1.0, 0.0};
  // Flag only applies where the label is non-zero.
  EXPECT_DOUBLE_EQ(loss(m, zero_label, w, 0.0), (1.0 + 4.0) / 2.0);
}

TEST(LossTest, L1TermAddsAbsoluteParameterSum) {
  MlpModel m = make_mlp({2, 2, 2, 1}, 7);
  std::vector<double> p(m.parameter_count(), -0.5);
  set_parameters(m, p);
  EXPECT_DOUBLE_EQ(loss(m, Dataset{}, {}, 0.1), 0.1 * 0.5 * p.size());
}

TEST(GradientTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(8);
  MlpModel m = make_mlp({6, 5, 4, 3}, 8);
  set_parameters(m, RandomVector(m.parameter_count(), rng, 0.7));
  m.input_mean = RandomVector(6, rng);
  m.input_scale.assign(6, 1.7);
  Dataset d = RandomDataset(9, 6, 3, rng);
  const ElementWeighting w{{true, false, true}, 5.0};
  std::vector<int> rows{0, 2, 3, 5, 8};
  const double l1 = 1e-3;

  std::vector<double> grad;
  loss_and_gradient(m, d, rows, w, l1, &grad);
  const std::vector<double> p0 = get_parameters(m);
  const double h = 1e-5;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    ASSERT_GT(std::abs(p0[i]), 2 * h);  // stay off the l1 kink
    std::vector<double> p = p0;
    p[i] = p0[i] + h;
    set_parameters(m, p);
    const double up = loss_and_gradient(m, d, rows, w, l1, nullptr);
    p[i] = p0[i] - h;
    set_parameters(m, p);
    const double down = loss_and_gradient(m, d, rows, w, l1, nullptr);
    const double fd = (up - down) / (2 * h);
    const double rel = std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
    EXPECT_LT(rel, 1e-4) << "parameter " << i << " fd " << fd << " analytic " << grad[i];
  }
}

TEST(MeanSampleTest, DuplicatesHighMeanRows) {
  Dataset d;
  d.Add({1.0}, {1.0, 1.0});
  d.Add({2.0}, {4.0, 5.0});
  const Dataset out = mean_sample(d, 4.0, 3);
  ASSERT_EQ(out.size(), 4);
  EXPECT_EQ(out.inputs[0], std::vector<double>{1.0});
  EXPECT_EQ(out.inputs[1], std::vector<double>{2.0});
  EXPECT_EQ(out.inputs[2], std::vector<double>{2.0});
  EXPECT_EQ(out.inputs[3], std::vector<double>{2.0});
}

TEST(MeanSampleTest, InfiniteThresholdAndDoubling) {
  Dataset d;
  d.Add({1.0}, {5.0});
  d.Add({2.0}, {6.0});
  EXPECT_EQ(mean_sample(d, std::numeric_limits<double>::infinity(), 3).size(), 2);
  EXPECT_EQ(mean_sample(d, 4.0, 2).size(), 4);
  EXPECT_EQ(mean_sample(d, 4.0, 1).size(), 2);
}

TEST(SparseFlagTest, ZeroFractionThreshold) {
  Dataset d;
  for (int r = 0; r < 20; ++r) d.Add({0.0}, {r == 0 ? 1.0 : 0.0, 1.0 + r});
  const std::vector<bool> f = flag_sparse_elements(d, 0.9);
  EXPECT_TRUE(f[0]);   // 95% zeros
  EXPECT_FALSE(f[1]);  // never zero
  Dataset all_zero;
  all_zero.Add({0.0}, {0.0});
  EXPECT_FALSE(flag_sparse_elements(all_zero, 1.0)[0]);
}

TEST(SplitTest, GroupsStayTogether) {
  Dataset d;
  for (int g = 0; g < 12; ++g)
    for (int c = 0; c < 3; ++c) d.Add({double(g)}, {0.0}, g);
  Dataset tr, va;
  split_by_group(d, 5, 1, &tr, &va);
  EXPECT_EQ(tr.size() + va.size(), d.size());
  EXPECT_EQ(va.size(), 2 * 3);
  for (int gv : va.groups)
    for (int gt : tr.groups) EXPECT_NE(gv, gt);
}

TEST(TrainTest, LearnsIdentityMap) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dataset tr, va;
  for (int r = 0; r < 400; ++r) {
    const double a = u(rng), b = u(rng);
    (r < 320 ? tr : va).Add({a, b}, {a, b});
  }
  TrainConfig cfg;
  cfg.hidden = {16, 16};
  cfg.l1 = 0.0;
  cfg.learning_rate = 5e-3;
  cfg.epochs = 200;
  cfg.seed = 9;
  const TrainResult res = train(tr, va, cfg);
  ASSERT_EQ(res.curve.size(), 200u);
  EXPECT_LT(res.curve.back().validation_loss, 1e-3);
}

TEST(TrainTest, ZeroLearningRateKeepsParameters) {
  std::mt19937_64 rng(10);
  const Dataset d = RandomDataset(40, 3, 2, rng);
  TrainConfig cfg;
  cfg.hidden = {4, 4};
  cfg.learning_rate = 0.0;
  cfg.epochs = 3;
  cfg.standardize_inputs = false;
  const MlpModel init = make_mlp({3, 4, 4, 2}, cfg.seed);
  const TrainResult res = train(d, Dataset{}, cfg);
  EXPECT_EQ(get_parameters(res.model), get_parameters(init));
}

TEST(TrainTest, DeterministicForFixedSeed) {
  std::mt19937_64 rng(11);
  const Dataset d = RandomDataset(64, 5, 3, rng);
  TrainConfig cfg;
  cfg.hidden = {8, 8};
  cfg.epochs = 5;
  cfg.seed = 77;
  EXPECT_EQ(train(d, d, cfg).model, train(d, d, cfg).model);
}

TEST(TrainTest, DivergenceAborts) {
  Dataset d;
  d.Add({1.0}, {std::numeric_limits<double>::infinity()});
  TrainConfig cfg;
  cfg.hidden = {2, 2};
  cfg.epochs = 1;
  EXPECT_THROW(train(d, Dataset{}, cfg), TrainingError);
  EXPECT_THROW(train(Dataset{}, Dataset{}, cfg), TrainingError);
}

class ModelFileTest : public ::testing::Test {
 protected:
  std::filesystem::path Path(const std::string& name) {
    return std::filesystem::path(::testing::TempDir()) / name;
  }
};

TEST_F(ModelFileTest, RoundTripIsExact) {
  std::mt19937_64 rng(12);
  MlpModel m = make_mlp({5, 7, 7, 4}, 12);
  set_parameters(m, RandomVector(m.parameter_count(), rng, 0.3));
  m.input_mean = RandomVector(5, rng);
  m.input_scale = {1.0, 2.0, 0.5, 3.0, 1.25};
  m.sparse_mask = {true, false, false, true};
  m.zones = 2;
  m.horizon = 1;
  save_model(Path("m.json"), m);
  const MlpModel back = load_model(Path("m.json"));
  EXPECT_EQ(back, m);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x = RandomVector(5, rng);
    EXPECT_EQ(forward(back, x), forward(m, x));
  }
}

TEST_F(ModelFileTest, TruncatedAndVersionMismatch) {
  const MlpModel m = make_mlp({2, 3, 3, 1}, 13);
  const std::string text = model_to_string(m);
  {
    std::ofstream out(Path("cut.json"));
    out << text.substr(0, text.size() / 2);
  }
  EXPECT_THROW(load_model(Path("cut.json")), LoadError);
  EXPECT_THROW(load_model(Path("missing.json")), LoadError);

  std::string other = text;
  const std::string key = "\"version\":1";
  ASSERT_NE(other.find(key), std::string::npos);
  other.replace(other.find(key), key.size(), "\"version\":7");
  try {
    model_from_string(other);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("7"), std::string::npos) << msg;
    EXPECT_NE(msg.find("1"), std::string::npos) << msg;
  }
}

}  // namespace
}  // namespace fleetreloc

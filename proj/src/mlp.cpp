// Copyright 2026 The adid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adid/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "adid/error.hpp"
#include "adid/seed.hpp"
#include "adid/sgd.hpp"

namespace adid {
namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

void check_chain(const MlpModel& model, Eigen::Index input_rows) {
  if (model.layers.empty()) fail(ErrorKind::kShape, "network has no layers");
  Eigen::Index width = input_rows;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    if (layer.weights.cols() != width || layer.bias.size() != layer.weights.rows())
      fail(ErrorKind::kShape, "layer " + std::to_string(l) + " expects input " +
                                  std::to_string(layer.weights.cols()) + ", got " + std::to_string(width));
    width = layer.weights.rows();
  }
}

}  // namespace

std::vector<std::size_t> MlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes{input_dim()};
  for (const auto& l : layers) sizes.push_back(static_cast<std::size_t>(l.weights.rows()));
  return sizes;
}

std::vector<std::span<double>> parameter_blocks(MlpModel& model) {
  std::vector<std::span<double>> blocks;
  for (auto& l : model.layers) {
    blocks.emplace_back(l.weights.data(), static_cast<std::size_t>(l.weights.size()));
    blocks.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return blocks;
}

MlpModel mlp_init(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) fail(ErrorKind::kConfig, "need at least input and output sizes");
  for (std::size_t s : layer_sizes)
    if (s == 0) fail(ErrorKind::kConfig, "layer sizes must be positive");
  std::mt19937_64 rng(seed);
  MlpModel model;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-r, r);
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = u(rng);
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  check_chain(model, inputs.rows());
  Eigen::MatrixXd a = inputs;
  for (const auto& layer : model.layers) {
    Eigen::MatrixXd z = layer.weights * a;
    z.colwise() += layer.bias;
    a = sigmoid(z);
  }
  return a;
}

Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return mlp_forward_batch(model, x);
}

double mlp_error(std::span<const double> target, std::span<const double> output) {
  if (target.size() != output.size())
    fail(ErrorKind::kShape, "target has " + std::to_string(target.size()) + " entries, output " +
                                std::to_string(output.size()));
  double e = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) e += (target[i] - output[i]) * (target[i] - output[i]);
  return 0.5 * e;
}

int argmax_label(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  if (scores.size() == 0) fail(ErrorKind::kEmptyInput, "empty score vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i)
    if (scores(i) > scores(best)) best = i;
  return static_cast<int>(best);
}

MlpLossGrad mlp_loss_grad(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                          std::span<const int> labels, Eigen::MatrixXd* input_grad) {
  check_chain(model, inputs.rows());
  const auto m = static_cast<Eigen::Index>(labels.size());
  if (m == 0) fail(ErrorKind::kEmptyInput, "empty batch");
  if (inputs.cols() != m) fail(ErrorKind::kShape, "inputs and labels disagree in count");
  const std::size_t depth = model.layers.size();

  std::vector<Eigen::MatrixXd> act(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = model.layers[l];
    Eigen::MatrixXd z = l == 0 ? Eigen::MatrixXd(layer.weights * inputs) : Eigen::MatrixXd(layer.weights * act[l - 1]);
    z.colwise() += layer.bias;
    act[l] = sigmoid(z);
  }

  const Eigen::MatrixXd& y = act.back();
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(y.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= y.rows()) fail(ErrorKind::kShape, "label " + std::to_string(label) + " outside class range");
    target(label, i) = 1.0;
  }

  const double inv_m = 1.0 / static_cast<double>(m);
  MlpLossGrad out;
  Eigen::MatrixXd delta;
  if (model.loss == Loss::kSquaredError) {
    out.loss = 0.5 * (target - y).squaredNorm() * inv_m;
    delta = ((y - target).array() * y.array() * (1.0 - y.array())).matrix() * inv_m;
  } else {
    constexpr double kFloor = 1e-300;
    const auto& ya = y.array();
    out.loss = -(target.array() * (ya.max(kFloor)).log() + (1.0 - target.array()) * ((1.0 - ya).max(kFloor)).log()).sum() * inv_m;
    delta = (y - target) * inv_m;
  }

  out.gradient.loss = model.loss;
  out.gradient.layers.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    const auto& below = l == 0 ? inputs : Eigen::Ref<const Eigen::MatrixXd>(act[l - 1]);
    auto& g = out.gradient.layers[l];
    g.weights.noalias() = delta * below.transpose();
    g.bias = delta.rowwise().sum();
    if (l == 0) {
      if (input_grad) input_grad->noalias() = model.layers[0].weights.transpose() * delta;
      break;
    }
    Eigen::MatrixXd back = model.layers[l].weights.transpose() * delta;
    delta = (back.array() * act[l - 1].array() * (1.0 - act[l - 1].array())).matrix();
  }
  return out;
}

void validate_hidden_layer_count(std::size_t layer_size_count) {
  if (layer_size_count < 3 || layer_size_count > 5)
    fail(ErrorKind::kConfig, "MLP supports 1 to 3 hidden layers, got " +
                                 std::to_string(static_cast<long>(layer_size_count) - 2));
}

MlpModel mlp_train(const Eigen::MatrixXd& inputs, std::span<const int> labels,
                   std::span<const std::size_t> layer_sizes, const TrainConfig& config,
                   std::vector<double>* epoch_loss) {
  validate_hidden_layer_count(layer_sizes.size());
  config.validate();
  if (labels.empty()) fail(ErrorKind::kEmptyInput, "no training samples");
  if (static_cast<std::size_t>(inputs.rows()) != layer_sizes.front())
    fail(ErrorKind::kShape, "input dimension " + std::to_string(inputs.rows()) + " does not match layer size " +
                                std::to_string(layer_sizes.front()));
  MlpModel model = mlp_init(layer_sizes, derive_seed(config.seed, {kInitStream}));
  model.loss = config.loss;
  auto losses = sgd_train(model, inputs, labels, config,
                          [](const MlpModel& m, const Eigen::MatrixXd& x, std::span<const int> y) {
                            return mlp_loss_grad(m, x, y);
                          });
  if (epoch_loss) *epoch_loss = std::move(losses);
  return model;
}

}  // namespace adid

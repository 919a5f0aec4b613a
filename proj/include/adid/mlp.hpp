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

#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "adid/train_config.hpp"

namespace adid {

struct DenseLayer {
  Eigen::MatrixXd weights;  // fan_out x fan_in
  Eigen::VectorXd bias;
};

/// Fully connected sigmoid network; every layer, including the output,
/// applies the logistic function.
struct MlpModel {
  std::vector<DenseLayer> layers;
  Loss loss = Loss::kSquaredError;

  std::size_t input_dim() const { return static_cast<std::size_t>(layers.front().weights.cols()); }
  int class_count() const { return static_cast<int>(layers.back().weights.rows()); }
  std::vector<std::size_t> layer_sizes() const;
};

std::vector<std::span<double>> parameter_blocks(MlpModel& model);

/// Uniform Glorot initialization, r = sqrt(6 / (fan_in + fan_out)); biases 0.
MlpModel mlp_init(std::span<const std::size_t> layer_sizes, std::uint64_t seed);

Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

/// 0.5 * sum_i (d_i - y_i)^2.
double mlp_error(std::span<const double> target, std::span<const double> output);

/// Index of the largest entry; ties go to the lowest index.
int argmax_label(const Eigen::Ref<const Eigen::VectorXd>& scores);

struct MlpLossGrad {
  double loss = 0.0;
  MlpModel gradient;
};

/// Mean per-sample loss over the batch (half squared error against one-hot targets,
/// or sigmoid cross-entropy) and its gradient. If `input_grad` is non-null it
/// receives dLoss/dInputs.
MlpLossGrad mlp_loss_grad(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                          std::span<const int> labels, Eigen::MatrixXd* input_grad = nullptr);

/// layer_sizes = [input, hidden..., classes] with 1 to 3 hidden layers.
/// `epoch_loss`, when given, receives the mean training loss of each epoch.
MlpModel mlp_train(const Eigen::MatrixXd& inputs, std::span<const int> labels,
                   std::span<const std::size_t> layer_sizes, const TrainConfig& config,
                   std::vector<double>* epoch_loss = nullptr);

void validate_hidden_layer_count(std::size_t layer_size_count);

}  // namespace adid

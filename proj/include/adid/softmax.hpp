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

/// Multinomial logistic regression. `theta` is K x (D + 1); the last column
/// is the bias and is excluded from weight decay.
struct SoftmaxModel {
  Eigen::MatrixXd theta;
  double lambda = 0.0;

  static SoftmaxModel zeros(int class_count, std::size_t input_dim, double lambda);

  int class_count() const { return static_cast<int>(theta.rows()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(theta.cols() - 1); }
};

Eigen::VectorXd softmax_predict(const SoftmaxModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Column-wise class probabilities (K x m).
Eigen::MatrixXd softmax_predict_batch(const SoftmaxModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

struct SoftmaxCostGrad {
  double cost = 0.0;
  Eigen::MatrixXd gradient;  // shape of theta
};

/// Mean negative log-likelihood plus (lambda / 2) * sum of squared non-bias
/// weights, and its gradient.
SoftmaxCostGrad softmax_cost_grad(const SoftmaxModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                  std::span<const int> labels);

/// Full-batch gradient descent from theta = 0; one step per epoch. The step
/// starts at `learning_rate` and is halved whenever it would increase J, so
/// the cost never rises.
/// `cost_history`, when given, receives J before every step and after the last.
SoftmaxModel softmax_train(const Eigen::Ref<const Eigen::MatrixXd>& inputs, std::span<const int> labels,
                           int class_count, const TrainConfig& config,
                           std::vector<double>* cost_history = nullptr);

}  // namespace adid

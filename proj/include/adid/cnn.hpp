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

#include "adid/mlp.hpp"
#include "adid/train_config.hpp"

namespace adid {

struct ConvSpec {
  int filters = 0;
  int width = 0;
  int stride = 1;
  int pool = 1;
};

/// conv(16, w9, s4) -> ReLU -> pool4 -> conv(32, w9, s2) -> ReLU -> pool4.
std::vector<ConvSpec> default_cnn_architecture();

struct ConvStage {
  Eigen::MatrixXd filters;  // filters x (in_channels * width); column = channel * width + tap
  Eigen::VectorXd bias;
  int width = 0;
  int stride = 1;
  int pool = 1;

  int out_channels() const { return static_cast<int>(filters.rows()); }
  int in_channels() const { return static_cast<int>(filters.cols()) / width; }
};

struct StageShape {
  std::size_t in_channels = 0;
  std::size_t in_length = 0;
  std::size_t conv_length = 0;
  std::size_t pooled_length = 0;
  std::size_t out_channels = 0;
};

/// Per-stage lengths for a time-domain input; throws if a stage would be empty.
std::vector<StageShape> cnn_shape_trace(std::size_t input_length, std::span<const ConvSpec> specs);

/// 1-D convolutional classifier over raw samples. The dense stage reads the
/// last pooled map flattened channel-major and feeds a softmax over classes.
struct CnnModel {
  std::size_t input_length = 0;
  std::vector<ConvStage> stages;
  DenseLayer dense;

  int class_count() const { return static_cast<int>(dense.weights.rows()); }
  std::vector<ConvSpec> architecture() const;
};

std::vector<std::span<double>> parameter_blocks(CnnModel& model);

CnnModel cnn_init(std::size_t input_length, int class_count, std::span<const ConvSpec> specs, std::uint64_t seed);

Eigen::MatrixXd cnn_predict_batch(const CnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);
Eigen::VectorXd cnn_predict(const CnnModel& model, std::span<const double> segment);

struct CnnLossGrad {
  double loss = 0.0;
  CnnModel gradient;
};

/// Mean cross-entropy of the softmax output and its gradient.
CnnLossGrad cnn_loss_grad(const CnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                          std::span<const int> labels);

CnnModel cnn_train(const Eigen::MatrixXd& inputs, std::span<const int> labels, int class_count,
                   const TrainConfig& config, std::span<const ConvSpec> specs = {},
                   std::vector<double>* epoch_loss = nullptr);

}  // namespace adid

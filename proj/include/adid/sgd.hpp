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

// Mini-batch gradient descent shared by the network models. A model type
// plugs in through `parameter_blocks(Model&)` and a loss/gradient callable
// returning {loss, gradient-shaped-like-model}.

#include <Eigen/Core>
#include <algorithm>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "adid/error.hpp"
#include "adid/seed.hpp"
#include "adid/train_config.hpp"

namespace adid {

inline constexpr std::uint64_t kShuffleStream = 0x5F0F;
inline constexpr std::uint64_t kInitStream = 0x1417;

template <class Model, class LossGrad>
std::vector<double> sgd_train(Model& model, const Eigen::MatrixXd& inputs, std::span<const int> labels,
                              const TrainConfig& config, LossGrad&& loss_grad) {
  config.validate();
  const std::size_t m = labels.size();
  if (m == 0) fail(ErrorKind::kEmptyInput, "no training samples");
  if (static_cast<std::size_t>(inputs.cols()) != m) fail(ErrorKind::kShape, "inputs and labels disagree in count");

  std::mt19937_64 rng(derive_seed(config.seed, {kShuffleStream}));
  std::vector<std::size_t> order(m);
  std::vector<double> epoch_loss;
  Eigen::MatrixXd batch;
  std::vector<int> batch_labels;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < m; start += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, m - start);
      batch.resize(inputs.rows(), static_cast<Eigen::Index>(n));
      batch_labels.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        batch.col(static_cast<Eigen::Index>(j)) = inputs.col(static_cast<Eigen::Index>(order[start + j]));
        batch_labels[j] = labels[order[start + j]];
      }
      auto result = loss_grad(model, batch, std::span<const int>(batch_labels));
      loss_sum += result.loss * static_cast<double>(n);
      auto params = parameter_blocks(model);
      auto grads = parameter_blocks(result.gradient);
      for (std::size_t b = 0; b < params.size(); ++b)
        for (std::size_t i = 0; i < params[b].size(); ++i) params[b][i] -= config.learning_rate * grads[b][i];
    }
    epoch_loss.push_back(loss_sum / static_cast<double>(m));
  }
  return epoch_loss;
}

}  // namespace adid

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

namespace adid {

struct ChunkRange {
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Contiguous chunks of ceil(dim / count) entries, the last one shorter.
std::vector<ChunkRange> chunk_ranges(std::size_t dim, std::size_t count);

/// The input vector is cut into chunks, each chunk passes through its own
/// sigmoid hidden layer, and the concatenated chunk outputs feed a shared
/// sigmoid network (`head`). The first hidden width is split evenly across
/// chunks so the hidden budget matches a plain network of the same sizes.
struct AveragedMlpModel {
  std::size_t input_dim = 0;
  std::vector<ChunkRange> chunks;
  std::vector<DenseLayer> chunk_layers;
  MlpModel head;

  int class_count() const { return head.class_count(); }
  std::size_t hidden_width() const { return head.input_dim(); }
  /// [input, first hidden (total), remaining head sizes...]
  std::vector<std::size_t> layer_sizes() const;
};

std::vector<std::span<double>> parameter_blocks(AveragedMlpModel& model);

/// Chunk widths for splitting `hidden` units over `count` chunks.
std::vector<std::size_t> chunk_widths(std::size_t hidden, std::size_t count);

AveragedMlpModel averaged_mlp_init(std::span<const std::size_t> layer_sizes, std::size_t chunk_count,
                                   std::uint64_t seed);

Eigen::MatrixXd averaged_mlp_forward_batch(const AveragedMlpModel& model,
                                           const Eigen::Ref<const Eigen::MatrixXd>& inputs);
Eigen::VectorXd averaged_mlp_forward(const AveragedMlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

struct AveragedMlpLossGrad {
  double loss = 0.0;
  AveragedMlpModel gradient;
};

AveragedMlpLossGrad averaged_mlp_loss_grad(const AveragedMlpModel& model,
                                           const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                           std::span<const int> labels);

/// The equivalent plain network whose first weight matrix is block diagonal.
MlpModel to_block_diagonal(const AveragedMlpModel& model);

AveragedMlpModel mlp_train_averaged(const Eigen::MatrixXd& inputs, std::span<const int> labels,
                                    std::size_t chunk_count, std::span<const std::size_t> layer_sizes,
                                    const TrainConfig& config, std::vector<double>* epoch_loss = nullptr);

}  // namespace adid

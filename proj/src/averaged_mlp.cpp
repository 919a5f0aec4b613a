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

#include "adid/averaged_mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "adid/error.hpp"
#include "adid/seed.hpp"
#include "adid/sgd.hpp"

namespace adid {
namespace {

Eigen::MatrixXd chunk_hidden(const AveragedMlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_dim)
    fail(ErrorKind::kShape, "averaged network expects dimension " + std::to_string(model.input_dim) + ", got " +
                                std::to_string(inputs.rows()));
  Eigen::MatrixXd hidden(static_cast<Eigen::Index>(model.hidden_width()), inputs.cols());
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < model.chunks.size(); ++c) {
    const auto& layer = model.chunk_layers[c];
    const auto& range = model.chunks[c];
    Eigen::MatrixXd z = layer.weights * inputs.middleRows(static_cast<Eigen::Index>(range.offset),
                                                          static_cast<Eigen::Index>(range.length));
    z.colwise() += layer.bias;
    hidden.middleRows(row, z.rows()) = (1.0 + (-z.array()).exp()).inverse().matrix();
    row += z.rows();
  }
  return hidden;
}

}  // namespace

std::vector<ChunkRange> chunk_ranges(std::size_t dim, std::size_t count) {
  if (count < 2) fail(ErrorKind::kConfig, "chunk_count must be at least 2");
  const std::size_t size = (dim + count - 1) / count;
  std::vector<ChunkRange> out;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t offset = c * size;
    if (offset >= dim)
      fail(ErrorKind::kConfig, std::to_string(count) + " chunks leave an empty chunk for dimension " + std::to_string(dim));
    out.push_back({offset, std::min(size, dim - offset)});
  }
  return out;
}

std::vector<std::size_t> chunk_widths(std::size_t hidden, std::size_t count) {
  if (hidden < count)
    fail(ErrorKind::kConfig, "hidden width " + std::to_string(hidden) + " cannot be split over " +
                                 std::to_string(count) + " chunks");
  std::vector<std::size_t> w(count, hidden / count);
  for (std::size_t c = 0; c < hidden % count; ++c) ++w[c];
  return w;
}

std::vector<std::size_t> AveragedMlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes{input_dim};
  auto head_sizes = head.layer_sizes();
  sizes.insert(sizes.end(), head_sizes.begin(), head_sizes.end());
  return sizes;
}

std::vector<std::span<double>> parameter_blocks(AveragedMlpModel& model) {
  std::vector<std::span<double>> blocks;
  for (auto& l : model.chunk_layers) {
    blocks.emplace_back(l.weights.data(), static_cast<std::size_t>(l.weights.size()));
    blocks.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  auto head = parameter_blocks(model.head);
  blocks.insert(blocks.end(), head.begin(), head.end());
  return blocks;
}

AveragedMlpModel averaged_mlp_init(std::span<const std::size_t> layer_sizes, std::size_t chunk_count,
                                   std::uint64_t seed) {
  if (layer_sizes.size() < 3) fail(ErrorKind::kConfig, "averaged network needs at least one hidden layer");
  AveragedMlpModel model;
  model.input_dim = layer_sizes[0];
  model.chunks = chunk_ranges(layer_sizes[0], chunk_count);
  const auto widths = chunk_widths(layer_sizes[1], chunk_count);

  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < chunk_count; ++c) {
    const auto fan_in = static_cast<Eigen::Index>(model.chunks[c].length);
    const auto fan_out = static_cast<Eigen::Index>(widths[c]);
    const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-r, r);
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = u(rng);
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    model.chunk_layers.push_back(std::move(layer));
  }
  model.head = mlp_init(layer_sizes.subspan(1), rng());
  return model;
}

Eigen::MatrixXd averaged_mlp_forward_batch(const AveragedMlpModel& model,
                                           const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  return mlp_forward_batch(model.head, chunk_hidden(model, inputs));
}

Eigen::VectorXd averaged_mlp_forward(const AveragedMlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return averaged_mlp_forward_batch(model, x);
}

AveragedMlpLossGrad averaged_mlp_loss_grad(const AveragedMlpModel& model,
                                           const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                           std::span<const int> labels) {
  const Eigen::MatrixXd hidden = chunk_hidden(model, inputs);
  Eigen::MatrixXd d_hidden;
  auto head = mlp_loss_grad(model.head, hidden, labels, &d_hidden);

  AveragedMlpLossGrad out;
  out.loss = head.loss;
  out.gradient.input_dim = model.input_dim;
  out.gradient.chunks = model.chunks;
  out.gradient.head = std::move(head.gradient);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < model.chunks.size(); ++c) {
    const auto rows = model.chunk_layers[c].weights.rows();
    const auto a = hidden.middleRows(row, rows).array();
    const Eigen::MatrixXd delta = (d_hidden.middleRows(row, rows).array() * a * (1.0 - a)).matrix();
    DenseLayer g;
    g.weights.noalias() = delta * inputs.middleRows(static_cast<Eigen::Index>(model.chunks[c].offset),
                                                    static_cast<Eigen::Index>(model.chunks[c].length))
                                      .transpose();
    g.bias = delta.rowwise().sum();
    out.gradient.chunk_layers.push_back(std::move(g));
    row += rows;
  }
  return out;
}

MlpModel to_block_diagonal(const AveragedMlpModel& model) {
  MlpModel plain;
  plain.loss = model.head.loss;
  DenseLayer first;
  first.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.hidden_width()),
                                        static_cast<Eigen::Index>(model.input_dim));
  first.bias.resize(first.weights.rows());
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < model.chunks.size(); ++c) {
    const auto& l = model.chunk_layers[c];
    first.weights.block(row, static_cast<Eigen::Index>(model.chunks[c].offset), l.weights.rows(), l.weights.cols()) =
        l.weights;
    first.bias.segment(row, l.bias.size()) = l.bias;
    row += l.weights.rows();
  }
  plain.layers.push_back(std::move(first));
  plain.layers.insert(plain.layers.end(), model.head.layers.begin(), model.head.layers.end());
  return plain;
}

AveragedMlpModel mlp_train_averaged(const Eigen::MatrixXd& inputs, std::span<const int> labels,
                                    std::size_t chunk_count, std::span<const std::size_t> layer_sizes,
                                    const TrainConfig& config, std::vector<double>* epoch_loss) {
  validate_hidden_layer_count(layer_sizes.size());
  config.validate();
  if (labels.empty()) fail(ErrorKind::kEmptyInput, "no training samples");
  if (static_cast<std::size_t>(inputs.rows()) != layer_sizes.front())
    fail(ErrorKind::kShape, "input dimension " + std::to_string(inputs.rows()) + " does not match layer size " +
                                std::to_string(layer_sizes.front()));
  AveragedMlpModel model = averaged_mlp_init(layer_sizes, chunk_count, derive_seed(config.seed, {kInitStream}));
  model.head.loss = config.loss;
  auto losses = sgd_train(model, inputs, labels, config,
                          [](const AveragedMlpModel& m, const Eigen::MatrixXd& x, std::span<const int> y) {
                            return averaged_mlp_loss_grad(m, x, y);
                          });
  if (epoch_loss) *epoch_loss = std::move(losses);
  return model;
}

}  // namespace adid

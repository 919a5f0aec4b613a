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

#include "adid/cnn.hpp"

#include <cmath>
#include <random>
#include <string>

#include "adid/error.hpp"
#include "adid/seed.hpp"
#include "adid/sgd.hpp"

namespace adid {
namespace {

using Index = Eigen::Index;

struct StageCache {
  Eigen::MatrixXd patches;         // (in_channels * width) x (conv_length * batch)
  Eigen::MatrixXd pre_activation;  // filters x (conv_length * batch)
  std::vector<Index> argmax;       // per pooled element, column into pre_activation
  Eigen::MatrixXd pooled;          // filters x (pooled_length * batch)
  StageShape shape;
};

struct ForwardCache {
  std::vector<StageCache> stages;
  Eigen::MatrixXd flat;    // (filters * pooled_length) x batch
  Eigen::MatrixXd probs;   // classes x batch
};

void im2col(const Eigen::Ref<const Eigen::MatrixXd>& in, const StageShape& s, int width, int stride, Index batch,
            Eigen::MatrixXd& patches) {
  const auto lin = static_cast<Index>(s.in_length), lc = static_cast<Index>(s.conv_length);
  patches.resize(static_cast<Index>(s.in_channels) * width, lc * batch);
  for (Index b = 0; b < batch; ++b)
    for (Index o = 0; o < lc; ++o)
      for (Index c = 0; c < static_cast<Index>(s.in_channels); ++c)
        for (Index t = 0; t < width; ++t) patches(c * width + t, b * lc + o) = in(c, b * lin + o * stride + t);
}

void col2im(const Eigen::MatrixXd& d_patches, const StageShape& s, int width, int stride, Index batch,
            Eigen::MatrixXd& d_in) {
  const auto lin = static_cast<Index>(s.in_length), lc = static_cast<Index>(s.conv_length);
  d_in = Eigen::MatrixXd::Zero(static_cast<Index>(s.in_channels), lin * batch);
  for (Index b = 0; b < batch; ++b)
    for (Index o = 0; o < lc; ++o)
      for (Index c = 0; c < static_cast<Index>(s.in_channels); ++c)
        for (Index t = 0; t < width; ++t) d_in(c, b * lin + o * stride + t) += d_patches(c * width + t, b * lc + o);
}

ForwardCache forward(const CnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_length)
    fail(ErrorKind::kShape, "convolutional model expects " + std::to_string(model.input_length) + " samples, got " +
                                std::to_string(inputs.rows()));
  const Index batch = inputs.cols();
  const auto shapes = cnn_shape_trace(model.input_length, model.architecture());

  ForwardCache cache;
  cache.stages.resize(model.stages.size());
  // Single-channel layout: sample b occupies columns [b * L, (b + 1) * L).
  Eigen::MatrixXd first(1, inputs.size());
  for (Index b = 0; b < batch; ++b) first.middleCols(b * inputs.rows(), inputs.rows()) = inputs.col(b).transpose();
  const Eigen::MatrixXd* in = &first;
  for (std::size_t si = 0; si < model.stages.size(); ++si) {
    const auto& stage = model.stages[si];
    auto& sc = cache.stages[si];
    sc.shape = shapes[si];
    im2col(*in, sc.shape, stage.width, stage.stride, batch, sc.patches);
    sc.pre_activation.noalias() = stage.filters * sc.patches;
    sc.pre_activation.colwise() += stage.bias;

    const auto lc = static_cast<Index>(sc.shape.conv_length), lp = static_cast<Index>(sc.shape.pooled_length);
    const Index f = stage.out_channels();
    sc.pooled.resize(f, lp * batch);
    sc.argmax.resize(static_cast<std::size_t>(f * lp * batch));
    for (Index b = 0; b < batch; ++b)
      for (Index p = 0; p < lp; ++p)
        for (Index ch = 0; ch < f; ++ch) {
          Index best = b * lc + p * stage.pool;
          double best_v = std::max(0.0, sc.pre_activation(ch, best));
          for (Index q = 1; q < stage.pool; ++q) {
            const Index idx = b * lc + p * stage.pool + q;
            const double v = std::max(0.0, sc.pre_activation(ch, idx));
            if (v > best_v) {
              best_v = v;
              best = idx;
            }
          }
          sc.pooled(ch, b * lp + p) = best_v;
          sc.argmax[static_cast<std::size_t>((b * lp + p) * f + ch)] = best;
        }
    in = &sc.pooled;
  }

  const auto& last = cache.stages.back();
  const auto lp = static_cast<Index>(last.shape.pooled_length);
  const Index f = static_cast<Index>(last.shape.out_channels);
  cache.flat.resize(f * lp, batch);
  for (Index b = 0; b < batch; ++b)
    for (Index ch = 0; ch < f; ++ch)
      for (Index p = 0; p < lp; ++p) cache.flat(ch * lp + p, b) = last.pooled(ch, b * lp + p);

  Eigen::MatrixXd z = model.dense.weights * cache.flat;
  z.colwise() += model.dense.bias;
  z.rowwise() -= z.colwise().maxCoeff();
  cache.probs = z.array().exp();
  cache.probs.array().rowwise() /= cache.probs.colwise().sum().array();
  return cache;
}

}  // namespace

std::vector<ConvSpec> default_cnn_architecture() { return {{16, 9, 4, 4}, {32, 9, 2, 4}}; }

std::vector<StageShape> cnn_shape_trace(std::size_t input_length, std::span<const ConvSpec> specs) {
  if (specs.empty()) fail(ErrorKind::kConfig, "convolutional model needs at least one stage");
  std::vector<StageShape> out;
  std::size_t channels = 1, length = input_length;
  for (const auto& spec : specs) {
    if (spec.filters <= 0 || spec.width <= 0 || spec.stride <= 0 || spec.pool <= 0)
      fail(ErrorKind::kConfig, "convolution parameters must be positive");
    if (length < static_cast<std::size_t>(spec.width))
      fail(ErrorKind::kShape, "stage input of length " + std::to_string(length) + " shorter than filter width");
    StageShape s;
    s.in_channels = channels;
    s.in_length = length;
    s.conv_length = (length - static_cast<std::size_t>(spec.width)) / static_cast<std::size_t>(spec.stride) + 1;
    s.pooled_length = s.conv_length / static_cast<std::size_t>(spec.pool);
    s.out_channels = static_cast<std::size_t>(spec.filters);
    if (s.pooled_length == 0) fail(ErrorKind::kShape, "pooling leaves an empty feature map");
    out.push_back(s);
    channels = s.out_channels;
    length = s.pooled_length;
  }
  return out;
}

std::vector<ConvSpec> CnnModel::architecture() const {
  std::vector<ConvSpec> specs;
  for (const auto& s : stages) specs.push_back({s.out_channels(), s.width, s.stride, s.pool});
  return specs;
}

std::vector<std::span<double>> parameter_blocks(CnnModel& model) {
  std::vector<std::span<double>> blocks;
  for (auto& s : model.stages) {
    blocks.emplace_back(s.filters.data(), static_cast<std::size_t>(s.filters.size()));
    blocks.emplace_back(s.bias.data(), static_cast<std::size_t>(s.bias.size()));
  }
  blocks.emplace_back(model.dense.weights.data(), static_cast<std::size_t>(model.dense.weights.size()));
  blocks.emplace_back(model.dense.bias.data(), static_cast<std::size_t>(model.dense.bias.size()));
  return blocks;
}

CnnModel cnn_init(std::size_t input_length, int class_count, std::span<const ConvSpec> specs, std::uint64_t seed) {
  if (class_count < 1) fail(ErrorKind::kConfig, "class_count must be positive");
  const auto shapes = cnn_shape_trace(input_length, specs);
  std::mt19937_64 rng(seed);
  auto fill = [&rng](Eigen::MatrixXd& w, double fan_in, double fan_out) {
    std::uniform_real_distribution<double> u(-std::sqrt(6.0 / (fan_in + fan_out)), std::sqrt(6.0 / (fan_in + fan_out)));
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  };

  CnnModel model;
  model.input_length = input_length;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ConvStage stage;
    stage.width = specs[i].width;
    stage.stride = specs[i].stride;
    stage.pool = specs[i].pool;
    stage.filters.resize(specs[i].filters, static_cast<Index>(shapes[i].in_channels) * specs[i].width);
    fill(stage.filters, static_cast<double>(shapes[i].in_channels * static_cast<std::size_t>(specs[i].width)),
         static_cast<double>(specs[i].filters * specs[i].width));
    stage.bias = Eigen::VectorXd::Zero(specs[i].filters);
    model.stages.push_back(std::move(stage));
  }
  const auto flat = static_cast<Index>(shapes.back().out_channels * shapes.back().pooled_length);
  model.dense.weights.resize(class_count, flat);
  fill(model.dense.weights, static_cast<double>(flat), static_cast<double>(class_count));
  model.dense.bias = Eigen::VectorXd::Zero(class_count);
  return model;
}

Eigen::MatrixXd cnn_predict_batch(const CnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  return forward(model, inputs).probs;
}

Eigen::VectorXd cnn_predict(const CnnModel& model, std::span<const double> segment) {
  return cnn_predict_batch(model, Eigen::Map<const Eigen::VectorXd>(segment.data(), static_cast<Index>(segment.size())));
}

CnnLossGrad cnn_loss_grad(const CnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                          std::span<const int> labels) {
  const auto m = static_cast<Index>(labels.size());
  if (m == 0) fail(ErrorKind::kEmptyInput, "empty batch");
  if (inputs.cols() != m) fail(ErrorKind::kShape, "inputs and labels disagree in count");
  ForwardCache cache = forward(model, inputs);

  const double inv_m = 1.0 / static_cast<double>(m);
  CnnLossGrad out;
  Eigen::MatrixXd d_logits = cache.probs;
  for (Index i = 0; i < m; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= model.class_count()) fail(ErrorKind::kShape, "label " + std::to_string(y) + " outside class range");
    out.loss -= std::log(std::max(cache.probs(y, i), 1e-300));
    d_logits(y, i) -= 1.0;
  }
  out.loss *= inv_m;
  d_logits *= inv_m;

  out.gradient.input_length = model.input_length;
  out.gradient.dense.weights.noalias() = d_logits * cache.flat.transpose();
  out.gradient.dense.bias = d_logits.rowwise().sum();
  const Eigen::MatrixXd d_flat = model.dense.weights.transpose() * d_logits;

  const auto& last = cache.stages.back();
  const auto lp_last = static_cast<Index>(last.shape.pooled_length);
  const auto f_last = static_cast<Index>(last.shape.out_channels);
  Eigen::MatrixXd d_pooled(f_last, lp_last * m);
  for (Index b = 0; b < m; ++b)
    for (Index ch = 0; ch < f_last; ++ch)
      for (Index p = 0; p < lp_last; ++p) d_pooled(ch, b * lp_last + p) = d_flat(ch * lp_last + p, b);

  out.gradient.stages.resize(model.stages.size());
  for (std::size_t si = model.stages.size(); si-- > 0;) {
    const auto& stage = model.stages[si];
    const auto& sc = cache.stages[si];
    const auto lp = static_cast<Index>(sc.shape.pooled_length);
    const Index f = stage.out_channels();

    Eigen::MatrixXd d_pre = Eigen::MatrixXd::Zero(f, sc.pre_activation.cols());
    for (Index col = 0; col < lp * m; ++col)
      for (Index ch = 0; ch < f; ++ch) {
        const Index src = sc.argmax[static_cast<std::size_t>(col * f + ch)];
        if (sc.pre_activation(ch, src) > 0.0) d_pre(ch, src) += d_pooled(ch, col);
      }

    auto& g = out.gradient.stages[si];
    g.width = stage.width;
    g.stride = stage.stride;
    g.pool = stage.pool;
    g.filters.noalias() = d_pre * sc.patches.transpose();
    g.bias = d_pre.rowwise().sum();
    if (si == 0) break;
    const Eigen::MatrixXd d_patches = stage.filters.transpose() * d_pre;
    col2im(d_patches, sc.shape, stage.width, stage.stride, m, d_pooled);
  }
  return out;
}

CnnModel cnn_train(const Eigen::MatrixXd& inputs, std::span<const int> labels, int class_count,
                   const TrainConfig& config, std::span<const ConvSpec> specs, std::vector<double>* epoch_loss) {
  config.validate();
  if (labels.empty()) fail(ErrorKind::kEmptyInput, "no training samples");
  const auto arch = specs.empty() ? default_cnn_architecture() : std::vector<ConvSpec>(specs.begin(), specs.end());
  CnnModel model = cnn_init(static_cast<std::size_t>(inputs.rows()), class_count, arch,
                            derive_seed(config.seed, {kInitStream}));
  auto losses = sgd_train(model, inputs, labels, config,
                          [](const CnnModel& m, const Eigen::MatrixXd& x, std::span<const int> y) {
                            return cnn_loss_grad(m, x, y);
                          });
  if (epoch_loss) *epoch_loss = std::move(losses);
  return model;
}

}  // namespace adid

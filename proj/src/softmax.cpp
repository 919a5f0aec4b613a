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

#include "adid/softmax.hpp"

#include <cmath>
#include <string>

#include "adid/error.hpp"

namespace adid {
namespace {

void check_inputs(const SoftmaxModel& model, Eigen::Index rows) {
  if (static_cast<std::size_t>(rows) != model.input_dim())
    fail(ErrorKind::kShape, "softmax expects dimension " + std::to_string(model.input_dim()) + ", got " +
                                std::to_string(rows));
}

// Logits with the per-column maximum subtracted.
Eigen::MatrixXd shifted_logits(const SoftmaxModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  const Eigen::Index d = inputs.rows();
  Eigen::MatrixXd z = model.theta.leftCols(d) * inputs;
  z.colwise() += model.theta.col(d);
  z.rowwise() -= z.colwise().maxCoeff();
  return z;
}

}  // namespace

SoftmaxModel SoftmaxModel::zeros(int class_count, std::size_t input_dim, double lambda) {
  SoftmaxModel m;
  m.theta = Eigen::MatrixXd::Zero(class_count, static_cast<Eigen::Index>(input_dim) + 1);
  m.lambda = lambda;
  return m;
}

Eigen::MatrixXd softmax_predict_batch(const SoftmaxModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  check_inputs(model, inputs.rows());
  Eigen::MatrixXd p = shifted_logits(model, inputs).array().exp();
  p.array().rowwise() /= p.colwise().sum().array();
  return p;
}

Eigen::VectorXd softmax_predict(const SoftmaxModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return softmax_predict_batch(model, x);
}

SoftmaxCostGrad softmax_cost_grad(const SoftmaxModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                  std::span<const int> labels) {
  check_inputs(model, inputs.rows());
  const auto m = static_cast<Eigen::Index>(labels.size());
  if (m == 0) fail(ErrorKind::kEmptyInput, "empty batch");
  if (inputs.cols() != m) fail(ErrorKind::kShape, "inputs and labels disagree in count");
  const Eigen::Index d = inputs.rows();
  const int k = model.class_count();

  Eigen::MatrixXd z = shifted_logits(model, inputs);
  Eigen::MatrixXd p = z.array().exp();
  const Eigen::RowVectorXd norm = p.colwise().sum();
  p.array().rowwise() /= norm.array();

  double nll = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k) fail(ErrorKind::kShape, "label " + std::to_string(y) + " outside class range");
    nll -= z(y, i) - std::log(norm(i));
    p(y, i) -= 1.0;  // p now holds P - Y
  }

  const auto weights = model.theta.leftCols(d);
  SoftmaxCostGrad out;
  out.cost = nll / static_cast<double>(m) + 0.5 * model.lambda * weights.squaredNorm();
  out.gradient.resize(k, d + 1);
  out.gradient.leftCols(d).noalias() = p * inputs.transpose() / static_cast<double>(m);
  out.gradient.leftCols(d) += model.lambda * weights;
  out.gradient.col(d) = p.rowwise().sum() / static_cast<double>(m);
  return out;
}

SoftmaxModel softmax_train(const Eigen::Ref<const Eigen::MatrixXd>& inputs, std::span<const int> labels,
                           int class_count, const TrainConfig& config, std::vector<double>* cost_history) {
  config.validate();
  if (labels.empty()) fail(ErrorKind::kEmptyInput, "no training samples");
  if (class_count < 1) fail(ErrorKind::kConfig, "class_count must be positive");
  SoftmaxModel model = SoftmaxModel::zeros(class_count, static_cast<std::size_t>(inputs.rows()), config.lambda);
  auto current = softmax_cost_grad(model, inputs, labels);
  if (cost_history) cost_history->push_back(current.cost);
  // The step starts at the configured rate and is halved whenever it would
  // raise J; a reduced step is kept for the remaining iterations.
  double rate = config.learning_rate;
  SoftmaxModel trial = model;
  for (int step = 0; step < config.epochs; ++step) {
    SoftmaxCostGrad next;
    for (int halvings = 0;; ++halvings) {
      trial.theta = model.theta - rate * current.gradient;
      next = softmax_cost_grad(trial, inputs, labels);
      if (std::isfinite(next.cost) && next.cost <= current.cost) break;
      if (halvings == 60) {
        next = current;
        trial.theta = model.theta;
        break;
      }
      rate *= 0.5;
    }
    std::swap(model.theta, trial.theta);
    current = std::move(next);
    if (cost_history) cost_history->push_back(current.cost);
  }
  return model;
}

}  // namespace adid

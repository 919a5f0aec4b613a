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

#include <filesystem>
#include <string_view>
#include <variant>

#include "adid/averaged_mlp.hpp"
#include "adid/cnn.hpp"
#include "adid/mlp.hpp"
#include "adid/softmax.hpp"

namespace adid {

using Model = std::variant<SoftmaxModel, MlpModel, AveragedMlpModel, CnnModel>;

enum class ModelType : std::uint8_t { kSoftmax = 0, kMlp = 1, kMlpAveraged = 2, kCnn = 3 };

inline constexpr std::uint32_t kModelFileVersion = 1;

ModelType model_type(const Model& model);
std::string_view model_type_name(ModelType type);
int model_class_count(const Model& model);
/// Rows expected in the input matrix (2049 for spectral models, the segment
/// length for the convolutional one).
std::size_t model_input_dim(const Model& model);

/// Class probabilities (softmax/CNN) or sigmoid outputs (MLP variants), one
/// column per input column.
Eigen::MatrixXd predict_batch(const Model& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);
std::vector<int> predict_labels(const Model& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

/// Binary layout (little-endian):
///   "ADID" | u32 version | payload | u32 CRC32(payload)
///   payload = u8 type | u32 classes | u32 n | u32 shape[n] | u64 p | f64 params[p]
/// Shape words and parameter order per type:
///   softmax      shape [input_dim];                      params theta (col-major), lambda
///   mlp          shape [loss, sizes...];                 params per layer: W (col-major), b
///   mlp-averaged shape [loss, input_dim, chunks, widths..., head sizes after the concatenation];
///                params per chunk W, b, then the head layers as mlp
///   cnn          shape [input_length, stages, (filters, width, stride, pool)...];
///                params per stage filters, bias, then dense W, b
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// Typed loaders; a file holding another model type raises a type-tag error.
SoftmaxModel load_softmax(const std::filesystem::path& path);
MlpModel load_mlp(const std::filesystem::path& path);
AveragedMlpModel load_averaged_mlp(const std::filesystem::path& path);
CnnModel load_cnn(const std::filesystem::path& path);

}  // namespace adid

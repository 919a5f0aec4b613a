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

#include <cstdint>
#include <string_view>

namespace adid {

enum class Loss { kSquaredError, kCrossEntropy };

std::string_view loss_name(Loss loss);
Loss parse_loss(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 30;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;
  double lambda = 1e-4;  // softmax weight decay
  Loss loss = Loss::kSquaredError;  // MLP objective

  static TrainConfig softmax_defaults() {
    TrainConfig c;
    c.learning_rate = 0.5;
    return c;
  }

  void validate() const;
};

}  // namespace adid

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

#include "adid/train_config.hpp"

#include <string>

#include "adid/error.hpp"

namespace adid {

std::string_view loss_name(Loss loss) { return loss == Loss::kSquaredError ? "squared_error" : "cross_entropy"; }

Loss parse_loss(std::string_view name) {
  if (name == "squared_error") return Loss::kSquaredError;
  if (name == "cross_entropy") return Loss::kCrossEntropy;
  fail(ErrorKind::kConfig, "unknown loss '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) fail(ErrorKind::kConfig, "learning_rate must be positive");
  if (epochs <= 0) fail(ErrorKind::kConfig, "epochs must be positive");
  if (batch_size == 0) fail(ErrorKind::kConfig, "batch_size must be positive");
  if (!(lambda >= 0.0)) fail(ErrorKind::kConfig, "lambda must be non-negative");
}

}  // namespace adid

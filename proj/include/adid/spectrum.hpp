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

#include <span>
#include <vector>

namespace adid {

inline constexpr std::size_t kSpectrumBins = 2049;

/// |X_k| for k = 0..2048 of a 4096-sample real segment (rectangular window,
/// unnormalized forward DFT). Conjugate bins are dropped.
std::vector<double> rfft_mag(std::span<const double> segment);

/// Elementwise ln(1 + v). Values must be non-negative.
std::vector<double> lognorm(std::span<const double> magnitudes);

}  // namespace adid

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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace adid {

enum class WaveletFamily { kHaar, kDb2, kDb4 };
enum class ThresholdRule { kUniversal };
enum class ThresholdMode { kSoft, kHard };

std::string_view wavelet_name(WaveletFamily family);
WaveletFamily parse_wavelet(std::string_view name);
std::string_view threshold_mode_name(ThresholdMode mode);
ThresholdMode parse_threshold_mode(std::string_view name);

struct DenoiseConfig {
  WaveletFamily wavelet = WaveletFamily::kDb4;
  int levels = 5;
  ThresholdRule threshold_rule = ThresholdRule::kUniversal;
  ThresholdMode threshold_mode = ThresholdMode::kSoft;

  void validate() const;  // 1 <= levels <= 12
};

/// Orthonormal reconstruction low-pass filter of the family (sums to sqrt 2).
std::span<const double> lowpass_filter(WaveletFamily family);

struct WaveletCoeffs {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;  // coarsest first, finest last
  int levels = 0;
  std::size_t original_length = 0;
};

/// Multi-level periodic DWT. The input length must be a power of two with at
/// least `levels` halvings available.
WaveletCoeffs dwt(std::span<const double> signal, const DenoiseConfig& config);

std::vector<double> idwt(const WaveletCoeffs& coeffs, const DenoiseConfig& config);

}  // namespace adid

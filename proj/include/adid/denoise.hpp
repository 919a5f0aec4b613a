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

#include "adid/wavelet.hpp"

namespace adid {

/// MAD noise estimate from the finest detail band: median(|d|) / 0.6745.
double estimate_noise_sigma(const WaveletCoeffs& coeffs);

/// sigma * sqrt(2 ln N) for an N-sample signal.
double universal_threshold(double sigma, std::size_t length);

double apply_threshold(double c, double threshold, ThresholdMode mode);

/// Speech estimate f: threshold every detail band, leave the approximation
/// band alone, reconstruct.
std::vector<double> denoise(std::span<const double> signal, const DenoiseConfig& config);

/// Residual e = s - f.
std::vector<double> extract_noise(std::span<const double> signal, const DenoiseConfig& config);

/// The no-extraction baseline: e = s.
std::vector<double> passthrough(std::span<const double> signal);

}  // namespace adid

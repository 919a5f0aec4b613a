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

#include "adid/denoise.hpp"

#include <algorithm>
#include <cmath>

namespace adid {

double estimate_noise_sigma(const WaveletCoeffs& coeffs) {
  std::vector<double> mag;
  mag.reserve(coeffs.details.back().size());
  for (double d : coeffs.details.back()) mag.push_back(std::abs(d));
  const std::size_t n = mag.size(), mid = n / 2;
  std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(mid), mag.end());
  double median = mag[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return median / 0.6745;
}

double universal_threshold(double sigma, std::size_t length) {
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)));
}

double apply_threshold(double c, double threshold, ThresholdMode mode) {
  if (mode == ThresholdMode::kHard) return std::abs(c) > threshold ? c : 0.0;
  const double shrunk = std::abs(c) - threshold;
  return shrunk > 0.0 ? std::copysign(shrunk, c) : 0.0;
}

std::vector<double> denoise(std::span<const double> signal, const DenoiseConfig& config) {
  WaveletCoeffs coeffs = dwt(signal, config);
  const double t = universal_threshold(estimate_noise_sigma(coeffs), signal.size());
  for (auto& band : coeffs.details)
    for (double& c : band) c = apply_threshold(c, t, config.threshold_mode);
  return idwt(coeffs, config);
}

std::vector<double> extract_noise(std::span<const double> signal, const DenoiseConfig& config) {
  std::vector<double> e = denoise(signal, config);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = signal[i] - e[i];
  return e;
}

std::vector<double> passthrough(std::span<const double> signal) {
  return {signal.begin(), signal.end()};
}

}  // namespace adid

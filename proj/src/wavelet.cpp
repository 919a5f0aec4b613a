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

#include "adid/wavelet.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "adid/error.hpp"

namespace adid {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr std::array<double, 2> kHaar = {kInvSqrt2, kInvSqrt2};

constexpr std::array<double, 4> kDb2 = {
    0.48296291314453414337, 0.83651630373780790557, 0.22414386804201338102,
    -0.12940952255126038117};

constexpr std::array<double, 8> kDb4 = {
    0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
    -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
    0.032883011666885199735, -0.010597401785069032105};

// One analysis step on a periodic signal of even length.
void analyze(std::span<const double> x, std::span<const double> h, std::vector<double>& approx,
             std::vector<double>& detail) {
  const std::size_t n = x.size(), half = n / 2, taps = h.size();
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (std::size_t j = 0; j < taps; ++j) {
      const double v = x[(2 * k + j) % n];
      const double g = (j % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - j];
      a += h[j] * v;
      d += g * v;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

void synthesize(std::span<const double> approx, std::span<const double> detail,
                std::span<const double> h, std::vector<double>& out) {
  const std::size_t half = approx.size(), n = 2 * half, taps = h.size();
  out.assign(n, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t j = 0; j < taps; ++j) {
      const double g = (j % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - j];
      out[(2 * k + j) % n] += h[j] * approx[k] + g * detail[k];
    }
  }
}

}  // namespace

std::string_view wavelet_name(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::kHaar: return "haar";
    case WaveletFamily::kDb2: return "db2";
    case WaveletFamily::kDb4: return "db4";
  }
  return "?";
}

WaveletFamily parse_wavelet(std::string_view name) {
  if (name == "haar" || name == "db1") return WaveletFamily::kHaar;
  if (name == "db2") return WaveletFamily::kDb2;
  if (name == "db4") return WaveletFamily::kDb4;
  fail(ErrorKind::kConfig, "unknown wavelet '" + std::string(name) + "'");
}

std::string_view threshold_mode_name(ThresholdMode mode) {
  return mode == ThresholdMode::kSoft ? "soft" : "hard";
}

ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "soft") return ThresholdMode::kSoft;
  if (name == "hard") return ThresholdMode::kHard;
  fail(ErrorKind::kConfig, "unknown threshold mode '" + std::string(name) + "'");
}

void DenoiseConfig::validate() const {
  if (levels < 1 || levels > 12)
    fail(ErrorKind::kConfig, "wavelet levels must be in [1, 12], got " + std::to_string(levels));
}

std::span<const double> lowpass_filter(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::kHaar: return kHaar;
    case WaveletFamily::kDb2: return kDb2;
    case WaveletFamily::kDb4: return kDb4;
  }
  return kDb4;
}

WaveletCoeffs dwt(std::span<const double> signal, const DenoiseConfig& config) {
  config.validate();
  const std::size_t n = signal.size();
  if (n < 2 || !std::has_single_bit(n))
    fail(ErrorKind::kShape, "signal length " + std::to_string(n) + " is not a power of two");
  if ((n >> config.levels) == 0)
    fail(ErrorKind::kShape, std::to_string(config.levels) + " levels exceed signal length " + std::to_string(n));
  for (double v : signal)
    if (!std::isfinite(v)) fail(ErrorKind::kNumeric, "non-finite sample in wavelet input");

  const auto h = lowpass_filter(config.wavelet);
  WaveletCoeffs c;
  c.levels = config.levels;
  c.original_length = n;
  c.details.resize(static_cast<std::size_t>(config.levels));
  std::vector<double> current(signal.begin(), signal.end()), next;
  for (int level = 0; level < config.levels; ++level) {
    // Finest band is produced first and stored last.
    auto& detail = c.details[static_cast<std::size_t>(config.levels - 1 - level)];
    analyze(current, h, next, detail);
    current.swap(next);
  }
  c.approx = std::move(current);
  return c;
}

std::vector<double> idwt(const WaveletCoeffs& coeffs, const DenoiseConfig& config) {
  config.validate();
  if (coeffs.levels != config.levels || coeffs.details.size() != static_cast<std::size_t>(config.levels))
    fail(ErrorKind::kShape, "coefficient levels do not match configuration");
  const std::size_t n = coeffs.original_length;
  if (n < 2 || !std::has_single_bit(n) || coeffs.approx.size() != (n >> config.levels))
    fail(ErrorKind::kShape, "approximation band length does not match original length");
  for (int i = 0; i < config.levels; ++i) {
    const std::size_t expect = n >> (config.levels - i);
    if (coeffs.details[static_cast<std::size_t>(i)].size() != expect)
      fail(ErrorKind::kShape, "detail band " + std::to_string(i) + " has wrong length");
  }

  const auto h = lowpass_filter(config.wavelet);
  std::vector<double> current = coeffs.approx, next;
  for (const auto& detail : coeffs.details) {
    synthesize(current, detail, h, next);
    current.swap(next);
  }
  return current;
}

}  // namespace adid

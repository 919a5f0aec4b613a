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

#include "adid/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "adid/corpus.hpp"
#include "adid/error.hpp"

namespace adid {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Planning is not thread-safe in FFTW; execution with new arrays is.
fftw_plan shared_plan() {
  static std::once_flag once;
  static fftw_plan plan = nullptr;
  std::call_once(once, [] {
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(kSegmentLength));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(kSpectrumBins));
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(kSegmentLength), in.get(), out.get(), FFTW_ESTIMATE);
  });
  return plan;
}

}  // namespace

std::vector<double> rfft_mag(std::span<const double> segment) {
  if (segment.size() != kSegmentLength)
    fail(ErrorKind::kShape, "spectrum input must have 4096 samples, got " + std::to_string(segment.size()));
  for (double v : segment)
    if (!std::isfinite(v)) fail(ErrorKind::kNumeric, "non-finite sample in spectrum input");

  thread_local std::unique_ptr<double, FftwFree> in(fftw_alloc_real(kSegmentLength));
  thread_local std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(kSpectrumBins));
  std::copy(segment.begin(), segment.end(), in.get());
  fftw_execute_dft_r2c(shared_plan(), in.get(), out.get());

  std::vector<double> mags(kSpectrumBins);
  for (std::size_t k = 0; k < kSpectrumBins; ++k) mags[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
  return mags;
}

std::vector<double> lognorm(std::span<const double> magnitudes) {
  std::vector<double> out(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double v = magnitudes[i];
    if (std::isnan(v)) fail(ErrorKind::kNumeric, "NaN magnitude at bin " + std::to_string(i));
    if (v < 0.0) fail(ErrorKind::kDomain, "negative magnitude at bin " + std::to_string(i));
    out[i] = std::log1p(v);
  }
  return out;
}

}  // namespace adid

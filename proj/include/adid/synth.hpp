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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "adid/corpus.hpp"

namespace adid {

/// Second-order IIR coloration applied to white noise, plus the RMS level of
/// the colored result. Each synthetic device owns one.
struct DeviceSignature {
  std::array<double, 3> b{};  // numerator, b[0] = 1
  std::array<double, 2> a{};  // denominator a1, a2 (a0 = 1)
  double pole_radius = 0.0;
  double pole_angle = 0.0;  // radians per sample
  double zero_radius = 0.0;
  double zero_angle = 0.0;
  double gain = 0.0;  // output RMS
};

DeviceSignature device_signature(int device, int device_count);

/// Power response |H(e^{jw})|^2 of the unnormalized coloration filter.
double signature_power_response(const DeviceSignature& sig, double omega);

/// Speech-like content: syllables of harmonic stacks with formant shaping and
/// raised-cosine envelopes over a sustained floor, with occasional short
/// pauses. Band-limited below 3.4 kHz.
std::vector<double> synth_speech(std::size_t length, std::uint32_t sample_rate, std::uint64_t seed);

/// Seeded white Gaussian noise filtered through the device's coloration and
/// scaled so its RMS equals `sig.gain`.
std::vector<double> synth_device_noise(const DeviceSignature& sig, std::size_t length,
                                       std::uint64_t seed);

/// One take of one device: speech + device noise, clipped to [-1, 1].
Recording synth_recording(const CorpusSpec& spec, int device, int take);

/// Writes (train + test) takes per device as PCM16 WAV plus `manifest.tsv`.
/// Returns the manifest path.
std::filesystem::path synth_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

}  // namespace adid

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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace adid {

/// A mono recording with samples scaled to [-1, 1].
struct Recording {
  std::vector<double> samples;
  std::uint32_t sample_rate = 0;
  int device_label = 0;
  std::string source_name;
};

/// Decodes a RIFF/WAVE PCM16 little-endian image held in memory. Channel 0
/// is kept for multichannel input; samples are divided by 32768.
Recording parse_wav(std::span<const std::uint8_t> bytes, std::string source_name = {});

/// Reads a WAV file. The label is not stored in the file and comes from the
/// caller (normally a manifest entry).
Recording load_wav(const std::filesystem::path& path, int device_label = 0);

/// Quantizes to PCM16 with round-to-nearest and clamping. A recording loaded
/// from a PCM16 file re-encodes to the identical payload.
std::vector<std::int16_t> quantize_pcm16(std::span<const double> samples);

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> samples,
                                           std::uint32_t sample_rate);

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate);

}  // namespace adid

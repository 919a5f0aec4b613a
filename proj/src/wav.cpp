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

#include "adid/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "adid/error.hpp"

namespace adid {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct FormatChunk {
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
};

FormatChunk parse_format(std::span<const std::uint8_t> body) {
  if (body.size() < 16) fail(ErrorKind::kFormat, "fmt chunk shorter than 16 bytes");
  std::uint16_t format = read_u16(body, 0);
  FormatChunk fmt;
  fmt.channels = read_u16(body, 2);
  fmt.sample_rate = read_u32(body, 4);
  fmt.block_align = read_u16(body, 12);
  std::uint16_t bits = read_u16(body, 14);
  if (format == kFormatExtensible) {
    // The first two bytes of the subformat GUID carry the plain format code.
    if (body.size() < 26) fail(ErrorKind::kFormat, "truncated WAVE_FORMAT_EXTENSIBLE chunk");
    format = read_u16(body, 24);
  }
  if (format != kFormatPcm || bits != 16)
    fail(ErrorKind::kUnsupportedFormat, "only 16-bit integer PCM is supported (format " +
                                            std::to_string(format) + ", " +
                                            std::to_string(bits) + " bits)");
  if (fmt.channels == 0) fail(ErrorKind::kFormat, "zero channels");
  if (fmt.sample_rate == 0) fail(ErrorKind::kFormat, "zero sample rate");
  if (fmt.block_align != 2 * fmt.channels) fail(ErrorKind::kFormat, "inconsistent block alignment");
  return fmt;
}

}  // namespace

Recording parse_wav(std::span<const std::uint8_t> bytes, std::string source_name) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    fail(ErrorKind::kFormat, "not a RIFF/WAVE file: " + source_name);

  std::optional<FormatChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t size = read_u32(bytes, pos + 4);
    std::size_t body_at = pos + 8;
    std::size_t available = bytes.size() - body_at;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size > available) fail(ErrorKind::kFormat, "truncated fmt chunk");
      fmt = parse_format(bytes.subspan(body_at, size));
    } else if (tag_is(bytes, pos, "data")) {
      // Streaming writers may leave a placeholder size; take what is present.
      data = bytes.subspan(body_at, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    if (size > available) break;
    pos = body_at + size + (size & 1u);
  }
  if (!fmt) fail(ErrorKind::kFormat, "missing fmt chunk: " + source_name);
  if (!have_data) fail(ErrorKind::kFormat, "missing data chunk: " + source_name);

  std::size_t frames = data.size() / fmt->block_align;
  if (frames == 0) fail(ErrorKind::kEmptyInput, "empty data chunk: " + source_name);

  Recording rec;
  rec.sample_rate = fmt->sample_rate;
  rec.source_name = std::move(source_name);
  rec.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    auto raw = static_cast<std::int16_t>(read_u16(data, i * fmt->block_align));
    rec.samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return rec;
}

Recording load_wav(const std::filesystem::path& path, int device_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Recording rec = parse_wav(bytes, path.string());
  rec.device_label = device_label;
  return rec;
}

std::vector<std::int16_t> quantize_pcm16(std::span<const double> samples) {
  std::vector<std::int16_t> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double scaled = std::nearbyint(samples[i] * 32768.0);
    out[i] = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
  }
  return out;
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> samples,
                                           std::uint32_t sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, sample_rate);
  put_u32(out, sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::int16_t s : samples) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate) {
  auto bytes = encode_wav_pcm16(quantize_pcm16(samples), sample_rate);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace adid

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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>

#include "adid/corpus.hpp"
#include "adid/error.hpp"
#include "adid/synth.hpp"
#include "adid/wav.hpp"
#include "test_support.hpp"

namespace adid {
namespace {

void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xFF);
  b.push_back(v >> 8);
}
void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
}
void tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Hand-assembled WAV image, independent of the encoder under test.
std::vector<std::uint8_t> make_wav(std::uint16_t format, std::uint16_t channels, std::uint16_t bits,
                                   const std::vector<std::int16_t>& interleaved, bool extra_chunk = false) {
  std::vector<std::uint8_t> body;
  tag(body, "WAVE");
  if (extra_chunk) {
    tag(body, "LIST");
    put32(body, 3);
    body.insert(body.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  }
  tag(body, "fmt ");
  put32(body, 16);
  put16(body, format);
  put16(body, channels);
  put32(body, 16000);
  put32(body, 16000u * channels * bits / 8);
  put16(body, static_cast<std::uint16_t>(channels * bits / 8));
  put16(body, bits);
  tag(body, "data");
  put32(body, static_cast<std::uint32_t>(interleaved.size() * 2));
  for (auto s : interleaved) put16(body, static_cast<std::uint16_t>(s));
  std::vector<std::uint8_t> out;
  tag(out, "RIFF");
  put32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no adid::Error thrown";
  return ErrorKind::kIo;
}

TEST(Wav, ParsesHandBuiltMono) {
  auto img = make_wav(1, 1, 16, {0, 16384, -32768, 32767});
  auto rec = parse_wav(img, "x");
  ASSERT_EQ(rec.samples.size(), 4u);
  EXPECT_EQ(rec.sample_rate, 16000u);
  EXPECT_DOUBLE_EQ(rec.samples[1], 0.5);
  EXPECT_DOUBLE_EQ(rec.samples[2], -1.0);
  EXPECT_DOUBLE_EQ(rec.samples[3], 32767.0 / 32768.0);
}

TEST(Wav, KeepsFirstChannelAndSkipsUnknownChunks) {
  auto img = make_wav(1, 2, 16, {100, -1, 200, -2, 300, -3}, true);
  auto rec = parse_wav(img);
  ASSERT_EQ(rec.samples.size(), 3u);
  EXPECT_DOUBLE_EQ(rec.samples[2], 300.0 / 32768.0);
}

TEST(Wav, RejectsBadInput) {
  auto good = make_wav(1, 1, 16, {1, 2});
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { parse_wav(bad_magic); }), ErrorKind::kFormat);
  auto float_fmt = make_wav(3, 1, 16, {1, 2});
  EXPECT_EQ(kind_of([&] { parse_wav(float_fmt); }), ErrorKind::kUnsupportedFormat);
  auto eight_bit = make_wav(1, 1, 8, {});
  EXPECT_EQ(kind_of([&] { parse_wav(eight_bit); }), ErrorKind::kUnsupportedFormat);
  auto empty = make_wav(1, 1, 16, {});
  EXPECT_EQ(kind_of([&] { parse_wav(empty); }), ErrorKind::kEmptyInput);
  std::vector<std::uint8_t> stub(good.begin(), good.begin() + 10);
  EXPECT_EQ(kind_of([&] { parse_wav(stub); }), ErrorKind::kFormat);
}

TEST(Wav, EncoderRoundTripIsExact) {
  std::vector<std::int16_t> pcm(1000);
  std::iota(pcm.begin(), pcm.end(), -500);
  pcm[7] = -32768;
  pcm[8] = 32767;
  auto img = encode_wav_pcm16(pcm, 16000);
  EXPECT_EQ(img, make_wav(1, 1, 16, pcm));
  auto rec = parse_wav(img);
  EXPECT_EQ(quantize_pcm16(rec.samples), pcm);
}

TEST(Wav, QuantizeRoundsAndClamps) {
  std::vector<double> x{0.0, 0.49 / 32768, 0.51 / 32768, -2.0, 2.0};
  auto q = quantize_pcm16(x);
  EXPECT_EQ(q, (std::vector<std::int16_t>{0, 0, 1, -32768, 32767}));
}

TEST(Wav, FileRoundTrip) {
  testing::TempDir dir("wav");
  std::vector<double> x{0.25, -0.5, 0.125};
  write_wav(dir.path() / "a.wav", x, 8000);
  auto rec = load_wav(dir.path() / "a.wav", 3);
  EXPECT_EQ(rec.sample_rate, 8000u);
  EXPECT_EQ(rec.device_label, 3);
  EXPECT_EQ(rec.samples, x);
  EXPECT_EQ(kind_of([&] { load_wav(dir.path() / "missing.wav"); }), ErrorKind::kIo);
}

TEST(Segments, OffsetsStayInRangeAndAreSeeded) {
  auto a = segment_offsets(10000, 500, 42);
  auto b = segment_offsets(10000, 500, 42);
  auto c = segment_offsets(10000, 500, 43);
  ASSERT_EQ(a.size(), 500u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (auto o : a) EXPECT_LE(o, 10000u - kSegmentLength);
  // Exactly one valid start when the recording is one segment long.
  for (auto o : segment_offsets(kSegmentLength, 5, 1)) EXPECT_EQ(o, 0u);
}

TEST(Segments, OffsetsCoverTheRange) {
  // Uniform draws with replacement: the mean start sits near the middle.
  auto o = segment_offsets(4096 + 9999, 20000, 7);
  double mean = std::accumulate(o.begin(), o.end(), 0.0) / static_cast<double>(o.size());
  EXPECT_NEAR(mean, 9999 / 2.0, 100.0);
  EXPECT_EQ(*std::min_element(o.begin(), o.end()), 0u);
  EXPECT_EQ(*std::max_element(o.begin(), o.end()), 9999u);
}

TEST(Segments, ErrorsOnShortRecordingOrZeroCount) {
  EXPECT_EQ(kind_of([] { segment_offsets(4095, 1, 1); }), ErrorKind::kTooShort);
  EXPECT_EQ(kind_of([] { segment_offsets(5000, 0, 1); }), ErrorKind::kConfig);
}

TEST(Segments, CopiesSamplesAtOffsets) {
  Recording rec;
  rec.sample_rate = 16000;
  rec.device_label = 2;
  rec.samples.resize(6000);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) rec.samples[i] = static_cast<double>(i) / 8192.0;
  auto segs = segment_recording(rec, 10, 5);
  ASSERT_EQ(segs.size(), 10u);
  for (const auto& s : segs) {
    ASSERT_EQ(s.samples.size(), kSegmentLength);
    EXPECT_EQ(s.device_label, 2);
    EXPECT_EQ(s.samples[0], rec.samples[s.origin_offset]);
    EXPECT_EQ(s.samples.back(), rec.samples[s.origin_offset + kSegmentLength - 1]);
  }
}

TEST(Recording, Validation) {
  Recording rec;
  rec.sample_rate = 16000;
  EXPECT_EQ(kind_of([&] { validate_recording(rec, 9); }), ErrorKind::kEmptyInput);
  rec.samples = {0.1, 1.5};
  EXPECT_EQ(kind_of([&] { validate_recording(rec, 9); }), ErrorKind::kNumeric);
  rec.samples = {0.1, 0.2};
  rec.device_label = 9;
  EXPECT_EQ(kind_of([&] { validate_recording(rec, 9); }), ErrorKind::kConfig);
  rec.device_label = 8;
  EXPECT_NO_THROW(validate_recording(rec, 9));
}

TEST(Corpus, DefaultCounts) {
  CorpusSpec spec;
  EXPECT_EQ(spec.train_segment_total(), 18000u);
  EXPECT_EQ(spec.test_segment_total(), 900u);
}

TEST(Corpus, ManifestRoundTrip) {
  testing::TempDir dir("manifest");
  std::vector<ManifestEntry> entries{{"a.wav", 0, Role::kTrain}, {"sub/b.wav", 4, Role::kTest}};
  write_manifest(dir.path() / "m.tsv", entries);
  auto m = read_manifest(dir.path() / "m.tsv");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[1].path, "sub/b.wav");
  EXPECT_EQ(m.entries[1].device_label, 4);
  EXPECT_EQ(m.entries[1].role, Role::kTest);
  EXPECT_EQ(m.class_count(), 5);
  EXPECT_EQ(m.resolve(m.entries[0]), dir.path() / "a.wav");
  std::ofstream(dir.path() / "bad.tsv") << "a.wav\tx\ttrain\n";
  EXPECT_EQ(kind_of([&] { read_manifest(dir.path() / "bad.tsv"); }), ErrorKind::kFormat);
}

TEST(Corpus, SegmentSeedsAreDistinctPerRecordingAndVoter) {
  std::set<std::uint64_t> seen;
  for (std::size_t e = 0; e < 27; ++e)
    for (std::size_t v = 0; v < 5; ++v) seen.insert(recording_segment_seed(1, e, v));
  EXPECT_EQ(seen.size(), 27u * 5u);
  EXPECT_EQ(recording_segment_seed(1, 3), recording_segment_seed(1, 3, 0));
}

TEST(Synth, DeviceFiltersAreStableAndDistinct) {
  std::set<std::pair<double, double>> placements;
  for (int d = 0; d < 9; ++d) {
    auto s = device_signature(d, 9);
    EXPECT_LT(s.pole_radius, 1.0);
    EXPECT_GT(s.gain, 0.0);
    placements.insert({s.pole_angle, s.zero_angle});
  }
  EXPECT_EQ(placements.size(), 9u);
  EXPECT_THROW(device_signature(9, 9), Error);
}

TEST(Synth, NoiseHasRequestedRmsAndShape) {
  auto sig = device_signature(2, 9);
  auto n = synth_device_noise(sig, 200000, 11);
  double ss = 0;
  for (double v : n) ss += v * v;
  EXPECT_NEAR(std::sqrt(ss / static_cast<double>(n.size())), sig.gain, 0.02 * sig.gain);
  EXPECT_EQ(n, synth_device_noise(sig, 200000, 11));
  // The resonance is louder than the opposite zero.
  EXPECT_GT(signature_power_response(sig, sig.pole_angle), 10 * signature_power_response(sig, sig.zero_angle));
}

TEST(Synth, SpeechIsBandLimited) {
  auto s = synth_speech(16000 * 4, 16000, 3);
  // Energy above 3.6 kHz via a crude projection onto a few high tones.
  double low = 0, high = 0;
  for (double f : {200.0, 500.0, 1000.0}) {
    double c = 0, q = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      c += s[n] * std::cos(2 * std::numbers::pi * f * n / 16000.0);
      q += s[n] * std::sin(2 * std::numbers::pi * f * n / 16000.0);
    }
    low += c * c + q * q;
  }
  for (double f : {4000.0, 5500.0, 7000.0}) {
    double c = 0, q = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      c += s[n] * std::cos(2 * std::numbers::pi * f * n / 16000.0);
      q += s[n] * std::sin(2 * std::numbers::pi * f * n / 16000.0);
    }
    high += c * c + q * q;
  }
  EXPECT_LT(high, 1e-3 * low);
  double peak = 0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  EXPECT_LT(peak, 1.0);
  EXPECT_GT(peak, 0.01);
}

TEST(Synth, CorpusOnDiskMatchesSpec) {
  testing::TempDir dir("synth");
  CorpusSpec spec;
  spec.device_count = 3;
  spec.duration_seconds = 0.5;
  auto manifest_path = synth_corpus(spec, dir.path());
  auto m = read_manifest(manifest_path);
  ASSERT_EQ(m.entries.size(), 9u);
  EXPECT_EQ(m.class_count(), 3);
  int train = 0;
  for (const auto& e : m.entries) {
    auto rec = load_wav(m.resolve(e), e.device_label);
    EXPECT_EQ(rec.samples.size(), 8000u);
    validate_recording(rec, 3);
    train += e.role == Role::kTrain;
  }
  EXPECT_EQ(train, 6);
  auto again = synth_recording(spec, 1, 2);
  auto on_disk = load_wav(dir.path() / "device1_take2.wav");
  EXPECT_EQ(quantize_pcm16(again.samples), quantize_pcm16(on_disk.samples));
}


TEST(Wav, HalfScaleValuesAndSilence) {
  auto rec = parse_wav(make_wav(1, 1, 16, {0, 16384, -16384, 32767}));
  EXPECT_EQ(rec.samples, (std::vector<double>{0.0, 0.5, -0.5, 32767.0 / 32768.0}));
  auto zeros = parse_wav(make_wav(1, 1, 16, std::vector<std::int16_t>(37, 0)));
  EXPECT_EQ(zeros.samples, std::vector<double>(37, 0.0));
}

TEST(Segments, SingleOffsetForMinimalRecording) {
  Recording rec;
  rec.sample_rate = 16000;
  rec.samples = testing::random_signal(kSegmentLength, 1, 0.1);
  auto segs = segment_recording(rec, 3, 9);
  ASSERT_EQ(segs.size(), 3u);
  for (const auto& s : segs) {
    EXPECT_EQ(s.origin_offset, 0u);
    EXPECT_EQ(s.samples, rec.samples);
  }
}

TEST(Segments, LongRecordingOffsets) {
  const std::size_t len = 15840000;
  auto a = segment_offsets(len, 1000, 99);
  ASSERT_EQ(a.size(), 1000u);
  for (auto o : a) EXPECT_LE(o, 15835904u);
  EXPECT_EQ(a, segment_offsets(len, 1000, 99));
}

TEST(Synth, SmallCorpusIsReproducible) {
  testing::TempDir a("synth_a"), b("synth_b");
  CorpusSpec spec;
  spec.device_count = 2;
  spec.seed = 7;
  spec.duration_seconds = 1.0;
  synth_corpus(spec, a.path());
  synth_corpus(spec, b.path());
  std::size_t wavs = 0;
  for (const auto& e : std::filesystem::directory_iterator(a.path())) {
    wavs += e.path().extension() == ".wav";
    std::ifstream fa(e.path(), std::ios::binary), fb(b.path() / e.path().filename(), std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(sa, sb) << e.path().filename();
  }
  EXPECT_EQ(wavs, 6u);
  EXPECT_EQ(read_manifest(a.path() / "manifest.tsv").class_count(), 2);
  spec.device_count = 0;
  EXPECT_EQ(kind_of([&] { synth_corpus(spec, a.path()); }), ErrorKind::kConfig);
}

}  // namespace
}  // namespace adid

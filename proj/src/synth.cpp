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

#include "adid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "adid/error.hpp"
#include "adid/seed.hpp"

namespace adid {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBaseNoiseRms = 0.004;
constexpr double kSpeechCutoffHz = 3400.0;
constexpr std::size_t kFilterWarmup = 2048;

enum Stream : std::uint64_t { kSpeechStream = 1, kNoiseStream = 2 };

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Unit-variance-input output power of the biquad, by summing the squared
// impulse response until it has decayed.
double impulse_energy(const DeviceSignature& sig) {
  double y1 = 0, y2 = 0, x1 = 0, x2 = 0, energy = 0;
  for (int n = 0; n < 20000; ++n) {
    double x = n == 0 ? 1.0 : 0.0;
    double y = sig.b[0] * x + sig.b[1] * x1 + sig.b[2] * x2 - sig.a[0] * y1 - sig.a[1] * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    energy += y * y;
  }
  return energy;
}

}  // namespace

DeviceSignature device_signature(int device, int device_count) {
  if (device_count <= 0 || device < 0 || device >= device_count)
    fail(ErrorKind::kConfig, "device index out of range");
  DeviceSignature sig;
  const double pos = (device + 0.5) / device_count;
  // Zeros sit opposite the resonance so neighbouring devices differ in tilt too.
  sig.pole_angle = kPi * (0.05 + 0.8 * pos);
  sig.pole_radius = 0.80;
  sig.zero_angle = kPi * std::fmod(0.5 + 0.8 * pos, 1.0);
  sig.zero_radius = 0.55;
  sig.b = {1.0, -2.0 * sig.zero_radius * std::cos(sig.zero_angle), sig.zero_radius * sig.zero_radius};
  sig.a = {-2.0 * sig.pole_radius * std::cos(sig.pole_angle), sig.pole_radius * sig.pole_radius};
  sig.gain = kBaseNoiseRms * (1.0 + 0.25 * static_cast<double>((device * 5) % device_count) / device_count);
  return sig;
}

double signature_power_response(const DeviceSignature& sig, double omega) {
  const std::complex<double> z1 = std::polar(1.0, -omega);
  const std::complex<double> z2 = z1 * z1;
  auto num = sig.b[0] + sig.b[1] * z1 + sig.b[2] * z2;
  auto den = 1.0 + sig.a[0] * z1 + sig.a[1] * z2;
  return std::norm(num) / std::norm(den);
}

std::vector<double> synth_speech(std::size_t length, std::uint32_t sample_rate, std::uint64_t seed) {
  std::vector<double> out(length, 0.0);
  std::mt19937_64 rng(seed);
  const double fs = sample_rate;
  const double cutoff = std::min(kSpeechCutoffHz, 0.45 * fs);
  std::vector<double> harmonic_amp;
  std::size_t pos = 0;
  while (pos < length) {
    if (uniform(rng, 0.0, 1.0) < 0.08) {
      pos += static_cast<std::size_t>(uniform(rng, 0.03, 0.12) * fs);
      continue;
    }
    const auto dur = static_cast<std::size_t>(uniform(rng, 0.08, 0.35) * fs);
    const double f0_start = uniform(rng, 90.0, 240.0);
    const double glide = uniform(rng, 0.85, 1.15);
    const double level = uniform(rng, 0.1, 0.6);
    const double f1 = uniform(rng, 300.0, 900.0);
    const double f2 = uniform(rng, 900.0, 2500.0);
    const double bw = uniform(rng, 120.0, 250.0);

    const double f0_max = f0_start * std::max(1.0, glide);
    const auto harmonics = static_cast<std::size_t>(cutoff / f0_max);
    harmonic_amp.assign(harmonics, 0.0);
    double norm = 0.0;
    for (std::size_t k = 1; k <= harmonics; ++k) {
      const double f = static_cast<double>(k) * f0_start;
      const double g1 = (f - f1) / bw, g2 = (f - f2) / bw;
      const double a = (1.0 / static_cast<double>(k)) *
                       (1.0 + 4.0 * std::exp(-g1 * g1) + 3.0 * std::exp(-g2 * g2));
      harmonic_amp[k - 1] = a;
      norm += a;
    }
    if (norm > 0)
      for (auto& a : harmonic_amp) a *= level / norm;

    double phase = uniform(rng, 0.0, 2.0 * kPi);
    const std::size_t end = std::min(length, pos + dur);
    for (std::size_t n = pos; n < end; ++n) {
      const double t = static_cast<double>(n - pos) / static_cast<double>(dur);
      const double env = 0.3 + 0.7 * std::sin(kPi * t) * std::sin(kPi * t);
      const double f0 = f0_start * (1.0 + (glide - 1.0) * t);
      phase += 2.0 * kPi * f0 / fs;
      if (phase > 2.0 * kPi) phase -= 2.0 * kPi;
      // Harmonic k has phase k*phase; build the powers of e^{j phase}.
      const std::complex<double> step = std::polar(1.0, phase);
      std::complex<double> rot = step;
      double acc = 0.0;
      for (double a : harmonic_amp) {
        acc += a * rot.imag();
        rot *= step;
      }
      out[n] += env * acc;
    }
    pos += dur;
  }
  return out;
}

std::vector<double> synth_device_noise(const DeviceSignature& sig, std::size_t length,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> white(0.0, 1.0);
  const double scale = sig.gain / std::sqrt(impulse_energy(sig));
  std::vector<double> out(length);
  double y1 = 0, y2 = 0, x1 = 0, x2 = 0;
  for (std::size_t n = 0; n < length + kFilterWarmup; ++n) {
    const double x = white(rng);
    const double y = sig.b[0] * x + sig.b[1] * x1 + sig.b[2] * x2 - sig.a[0] * y1 - sig.a[1] * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    if (n >= kFilterWarmup) out[n - kFilterWarmup] = scale * y;
  }
  return out;
}

Recording synth_recording(const CorpusSpec& spec, int device, int take) {
  spec.validate();
  const auto length = static_cast<std::size_t>(std::ceil(spec.duration_seconds * spec.sample_rate));
  const auto takes = static_cast<std::uint64_t>(spec.recordings_per_device_train + spec.recordings_per_device_test);
  const std::uint64_t file_index = static_cast<std::uint64_t>(device) * takes + static_cast<std::uint64_t>(take);

  Recording rec;
  rec.sample_rate = spec.sample_rate;
  rec.device_label = device;
  rec.source_name = "device" + std::to_string(device) + "_take" + std::to_string(take);
  rec.samples = synth_speech(length, spec.sample_rate, derive_seed(spec.seed, {kSpeechStream, file_index}));
  const auto noise = synth_device_noise(device_signature(device, spec.device_count), length,
                                        derive_seed(spec.seed, {kNoiseStream, file_index}));
  for (std::size_t n = 0; n < length; ++n)
    rec.samples[n] = std::clamp(rec.samples[n] + noise[n], -1.0, 1.0);
  return rec;
}

std::filesystem::path synth_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries;
  const int takes = spec.recordings_per_device_train + spec.recordings_per_device_test;
  for (int d = 0; d < spec.device_count; ++d) {
    for (int t = 0; t < takes; ++t) {
      Recording rec = synth_recording(spec, d, t);
      ManifestEntry e;
      e.path = rec.source_name + ".wav";
      e.device_label = d;
      e.role = t < spec.recordings_per_device_train ? Role::kTrain : Role::kTest;
      write_wav(out_dir / e.path, rec.samples, rec.sample_rate);
      entries.push_back(std::move(e));
    }
  }
  auto manifest = out_dir / "manifest.tsv";
  write_manifest(manifest, entries);
  return manifest;
}

}  // namespace adid

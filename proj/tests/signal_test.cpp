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
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include "adid/denoise.hpp"
#include "adid/error.hpp"
#include "adid/features.hpp"
#include "adid/feature_io.hpp"
#include "adid/spectrum.hpp"
#include "adid/synth.hpp"
#include "adid/wavelet.hpp"
#include "test_support.hpp"

namespace adid {
namespace {

double energy(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

DenoiseConfig with(WaveletFamily f, int levels) {
  DenoiseConfig c;
  c.wavelet = f;
  c.levels = levels;
  return c;
}

// Frozen Daubechies-4 (8-tap) low-pass values from an independent
// high-precision spectral factorization.
TEST(Wavelet, Db4FilterMatchesReference) {
  const double ref[8] = {0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
                         -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
                         0.032883011666885199735, -0.010597401785069032105};
  auto h = lowpass_filter(WaveletFamily::kDb4);
  ASSERT_EQ(h.size(), 8u);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(h[static_cast<std::size_t>(i)], ref[i], 1e-15);
}

TEST(Wavelet, FiltersAreOrthonormal) {
  for (auto f : {WaveletFamily::kHaar, WaveletFamily::kDb2, WaveletFamily::kDb4}) {
    auto h = lowpass_filter(f);
    EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), std::numbers::sqrt2, 1e-14);
    // Double-shift orthogonality: sum h[j] h[j + 2m] = delta(m).
    for (std::size_t m = 0; 2 * m < h.size(); ++m) {
      double s = 0;
      for (std::size_t j = 0; j + 2 * m < h.size(); ++j) s += h[j] * h[j + 2 * m];
      EXPECT_NEAR(s, m == 0 ? 1.0 : 0.0, 1e-14) << wavelet_name(f) << " shift " << m;
    }
  }
}

TEST(Wavelet, HaarSingleLevelByHand) {
  std::vector<double> x{1, 3, -2, 2};
  auto c = dwt(x, with(WaveletFamily::kHaar, 1));
  const double r = std::numbers::sqrt2 / 2;
  ASSERT_EQ(c.approx.size(), 2u);
  EXPECT_NEAR(c.approx[0], 4 * r, 1e-15);
  EXPECT_NEAR(c.approx[1], 0.0, 1e-15);
  EXPECT_NEAR(c.details[0][0], -2 * r, 1e-15);
  EXPECT_NEAR(c.details[0][1], -4 * r, 1e-15);
}

TEST(Wavelet, Db4AnnihilatesCubics) {
  // Four vanishing moments: away from the periodic wrap, detail coefficients
  // of a cubic vanish.
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / 64.0;
    x[i] = 1.0 - 2.0 * t + 3.0 * t * t - 0.5 * t * t * t;
  }
  auto c = dwt(x, with(WaveletFamily::kDb4, 1));
  for (std::size_t k = 0; 2 * k + 7 < x.size(); ++k) EXPECT_NEAR(c.details[0][k], 0.0, 1e-12);
}

TEST(Wavelet, ConstantSignalOneLevel) {
  std::vector<double> x(4096, 0.7);
  auto c = dwt(x, with(WaveletFamily::kDb4, 1));
  for (double v : c.approx) EXPECT_NEAR(v, 0.7 * std::numbers::sqrt2, 1e-14);
  for (double v : c.details[0]) EXPECT_NEAR(v, 0.0, 1e-14);
  auto y = idwt(c, with(WaveletFamily::kDb4, 1));
  for (double v : y) EXPECT_NEAR(v, 0.7, 1e-12);
  auto z = dwt(std::vector<double>(64, 0.0), with(WaveletFamily::kDb4, 3));
  for (const auto& band : z.details)
    for (double v : band) EXPECT_EQ(v, 0.0);
}

TEST(Wavelet, BandLayoutCoarsestFirst) {
  auto c = dwt(testing::random_signal(4096, 1), DenoiseConfig{});
  EXPECT_EQ(c.levels, 5);
  EXPECT_EQ(c.approx.size(), 128u);
  ASSERT_EQ(c.details.size(), 5u);
  EXPECT_EQ(c.details.front().size(), 128u);
  EXPECT_EQ(c.details.back().size(), 2048u);
}

TEST(Wavelet, RoundTripAndParseval) {
  for (auto f : {WaveletFamily::kHaar, WaveletFamily::kDb2, WaveletFamily::kDb4}) {
    for (int levels : {1, 3, 5, 12}) {
      auto x = testing::random_signal(4096, 100 + static_cast<std::uint64_t>(levels));
      auto cfg = with(f, levels);
      auto c = dwt(x, cfg);
      double ce = energy(c.approx);
      for (const auto& d : c.details) ce += energy(d);
      EXPECT_NEAR(ce / energy(x), 1.0, 1e-12);
      auto y = idwt(c, cfg);
      for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(y[i], x[i], 1e-11);
    }
  }
}

TEST(Wavelet, RejectsBadShapes) {
  EXPECT_THROW(dwt(std::vector<double>(100, 0.0), DenoiseConfig{}), Error);
  EXPECT_THROW(dwt(std::vector<double>(16, 0.0), with(WaveletFamily::kDb4, 5)), Error);
  EXPECT_NO_THROW(dwt(std::vector<double>(32, 0.0), with(WaveletFamily::kDb4, 5)));
  std::vector<double> bad(64, 0.0);
  bad[3] = std::nan("");
  EXPECT_THROW(dwt(bad, with(WaveletFamily::kDb4, 2)), Error);
  auto c = dwt(std::vector<double>(64, 1.0), with(WaveletFamily::kDb4, 2));
  c.details[0].pop_back();
  EXPECT_THROW(idwt(c, with(WaveletFamily::kDb4, 2)), Error);
  EXPECT_THROW(DenoiseConfig{.levels = 0}.validate(), Error);
  EXPECT_THROW(parse_wavelet("sym8"), Error);
}

TEST(Denoise, MadSigmaOnKnownBand) {
  WaveletCoeffs c;
  c.details = {{1.0}, {-4.0, 1.0, -2.0, 3.0}};  // finest last; median |d| = 2.5
  EXPECT_DOUBLE_EQ(estimate_noise_sigma(c), 2.5 / 0.6745);
  c.details.back() = {-7.0, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(estimate_noise_sigma(c), 2.0 / 0.6745);
}

TEST(Denoise, UniversalThresholdValue) {
  // sqrt(2 ln 4096) = 4.0784...
  EXPECT_NEAR(universal_threshold(1.0, 4096), 4.0786679606752359, 1e-14);
  EXPECT_NEAR(universal_threshold(0.5, 4096), 0.5 * 4.0786679606752359, 1e-14);
}

TEST(Denoise, ThresholdRules) {
  EXPECT_DOUBLE_EQ(apply_threshold(3.0, 1.0, ThresholdMode::kSoft), 2.0);
  EXPECT_DOUBLE_EQ(apply_threshold(-3.0, 1.0, ThresholdMode::kSoft), -2.0);
  EXPECT_DOUBLE_EQ(apply_threshold(0.5, 1.0, ThresholdMode::kSoft), 0.0);
  EXPECT_DOUBLE_EQ(apply_threshold(1.0, 1.0, ThresholdMode::kSoft), 0.0);
  EXPECT_DOUBLE_EQ(apply_threshold(-3.0, 1.0, ThresholdMode::kHard), -3.0);
  EXPECT_DOUBLE_EQ(apply_threshold(0.9, 1.0, ThresholdMode::kHard), 0.0);
}

TEST(Denoise, SubtractionIdentity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto x = testing::random_signal(4096, seed, 0.01 + 0.1 * static_cast<double>(seed % 5));
    auto f = denoise(x, DenoiseConfig{});
    auto e = extract_noise(x, DenoiseConfig{});
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(f[i] + e[i], x[i], 1e-12);
  }
  auto x = testing::random_signal(4096, 9);
  EXPECT_EQ(passthrough(x), x);
}

TEST(Denoise, ConstantSignalHasNoResidual) {
  std::vector<double> x(4096, 0.3);
  auto e = extract_noise(x, DenoiseConfig{});
  for (double v : e) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Denoise, SeparatesToneFromWhiteNoise) {
  // A strong low tone lands in the estimate; the residual is mostly the noise.
  auto noise = testing::random_signal(4096, 4, 0.01);
  std::vector<double> x(4096);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * std::sin(2 * std::numbers::pi * 8.0 * i / 4096.0) + noise[i];
  auto e = extract_noise(x, DenoiseConfig{});
  std::vector<double> diff(4096);
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = e[i] - noise[i];
  EXPECT_LT(energy(diff), 0.2 * energy(noise));
}

TEST(Denoise, ZeroSignalStaysZero) {
  std::vector<double> z(4096, 0.0);
  for (double v : denoise(z, DenoiseConfig{})) EXPECT_EQ(v, 0.0);
  for (double v : extract_noise(z, DenoiseConfig{})) EXPECT_EQ(v, 0.0);
}

TEST(Denoise, SuppressesPureWhiteNoise) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto x = testing::random_signal(4096, 700 + seed, 1e-3);
    EXPECT_LT(energy(denoise(x, DenoiseConfig{})), 0.15 * energy(x)) << "seed " << seed;
  }
}

TEST(Denoise, KeepsLargeRamp) {
  auto noise = testing::random_signal(4096, 12, 1e-3);
  std::vector<double> ramp(4096), x(4096);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ramp[i] = static_cast<double>(i) / 4096.0;
    x[i] = ramp[i] + noise[i];
  }
  auto f = denoise(x, DenoiseConfig{});
  const double mf = std::accumulate(f.begin(), f.end(), 0.0) / 4096, mr = 0.5 - 0.5 / 4096;
  double sfr = 0, sff = 0, srr = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sfr += (f[i] - mf) * (ramp[i] - mr);
    sff += (f[i] - mf) * (f[i] - mf);
    srr += (ramp[i] - mr) * (ramp[i] - mr);
  }
  EXPECT_GT(sfr / std::sqrt(sff * srr), 0.99);
}

TEST(Denoise, SubThresholdDetailsBecomeTheResidual) {
  // Every detail coefficient lies in [-1, 1] while the finest-band MAD puts
  // T near 3, so thresholding clears all detail bands and the residual is
  // the detail-only reconstruction.
  const DenoiseConfig cfg;
  auto c = dwt(testing::random_signal(4096, 5), cfg);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& band : c.details)
    for (double& v : band) v = u(rng);
  const auto x = idwt(c, cfg);
  auto details_only = c;
  std::fill(details_only.approx.begin(), details_only.approx.end(), 0.0);
  const auto expect = idwt(details_only, cfg);
  const auto e = extract_noise(x, cfg);
  for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(e[i], expect[i], 1e-12);
}

TEST(Denoise, PositivelyHomogeneous) {
  auto x = testing::random_signal(4096, 31, 0.2);
  auto e = extract_noise(x, DenoiseConfig{});
  for (double alpha : {0.001, 3.5}) {
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = alpha * x[i];
    auto ea = extract_noise(ax, DenoiseConfig{});
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(ea[i], alpha * e[i], 1e-12 * std::max(1.0, alpha));
  }
}

// Long-double naive DFT as the independent oracle.
std::vector<double> naive_magnitude(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) /
                              static_cast<long double>(n);
      re += x[t] * std::cos(ang);
      im -= x[t] * std::sin(ang);
    }
    out[k] = static_cast<double>(std::sqrt(re * re + im * im));
  }
  return out;
}

TEST(Spectrum, MatchesNaiveDft) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto x = testing::random_signal(4096, 500 + seed);
    auto fast = rfft_mag(x);
    auto slow = naive_magnitude(x);
    ASSERT_EQ(fast.size(), kSpectrumBins);
    for (std::size_t k = 0; k < fast.size(); ++k) ASSERT_NEAR(fast[k], slow[k], 1e-9) << "bin " << k;
  }
}

TEST(Spectrum, ImpulseAndConstant) {
  std::vector<double> delta(4096, 0.0);
  delta[0] = 1.0;
  for (double v : rfft_mag(delta)) EXPECT_NEAR(v, 1.0, 1e-12);
  std::vector<double> ones(4096, 1.0);
  auto m = rfft_mag(ones);
  EXPECT_NEAR(m[0], 4096.0, 1e-9);
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_NEAR(m[k], 0.0, 1e-9);
}

TEST(Spectrum, RejectsWrongLengthAndNonFinite) {
  EXPECT_THROW(rfft_mag(std::vector<double>(4095, 0.0)), Error);
  std::vector<double> x(4096, 0.0);
  x[1] = INFINITY;
  EXPECT_THROW(rfft_mag(x), Error);
}

TEST(Spectrum, LogNorm) {
  auto v = lognorm(std::vector<double>{0.0, 1.0, std::exp(2.0) - 1.0});
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], std::log(2.0));
  EXPECT_NEAR(v[2], 2.0, 1e-15);
  try {
    lognorm(std::vector<double>{-1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  }
  EXPECT_THROW(lognorm(std::vector<double>{std::nan("")}), Error);
}

Segment make_segment(std::uint64_t seed, int label) {
  Segment s;
  s.samples = testing::random_signal(4096, seed, 0.05);
  s.device_label = label;
  return s;
}

TEST(Features, ComposesStages) {
  auto seg = make_segment(3, 4);
  auto raw = featurize(seg, FeatureMode::kRaw, DenoiseConfig{});
  EXPECT_EQ(raw.values, lognorm(rfft_mag(seg.samples)));
  EXPECT_EQ(raw.device_label, 4);
  auto noise = featurize(seg, FeatureMode::kNoise, DenoiseConfig{});
  EXPECT_EQ(noise.values, lognorm(rfft_mag(extract_noise(seg.samples, DenoiseConfig{}))));
  for (double v : noise.values) EXPECT_GE(v, 0.0);
}

TEST(Features, MatrixLayout) {
  std::vector<Segment> segs{make_segment(1, 0), make_segment(2, 2), make_segment(3, 1)};
  auto m = build_matrix(segs, FeatureMode::kRaw, DenoiseConfig{});
  EXPECT_EQ(m.dim(), kFeatureDim);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.class_count(), 3);
  auto v = featurize(segs[1], FeatureMode::kRaw, DenoiseConfig{}).values;
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(m.values(static_cast<Eigen::Index>(i), 1), v[i]);
  EXPECT_NEAR(global_histogram(m).sum(), m.values.sum(), 1e-9);
  auto w = waveform_matrix(segs);
  EXPECT_EQ(w.dim(), 4096u);
  EXPECT_EQ(w.values(10, 2), segs[2].samples[10]);
  EXPECT_THROW(build_matrix(std::span<const Segment>{}, FeatureMode::kRaw, DenoiseConfig{}), Error);
}

TEST(FeatureIo, RoundTripAndCorruption) {
  testing::TempDir dir("adfm");
  FeatureMatrix m;
  m.values = testing::random_matrix(2049, 5, 8);
  m.labels = {0, 3, 1, 8, 2};
  write_feature_file(dir.path() / "m.adfm", m);
  auto back = read_feature_file(dir.path() / "m.adfm");
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(std::filesystem::file_size(dir.path() / "m.adfm"), 16u + 5 * 2 + 2049u * 5 * 8);

  std::filesystem::resize_file(dir.path() / "m.adfm", 100);
  EXPECT_THROW(read_feature_file(dir.path() / "m.adfm"), Error);
  std::ofstream(dir.path() / "bad.adfm") << "NOPE0000000000000000";
  try {
    read_feature_file(dir.path() / "bad.adfm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
  }

  write_feature_csv(dir.path() / "m.csv", m);
  std::ifstream in(dir.path() / "m.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("f0,f1,", 0), 0u);
  EXPECT_NE(header.find(",f2048,label"), std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 5);
}


TEST(Spectrum, ZeroAndCosine) {
  for (double v : rfft_mag(std::vector<double>(4096, 0.0))) EXPECT_EQ(v, 0.0);
  std::vector<double> x(4096);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * std::numbers::pi * 100.0 * static_cast<double>(n) / 4096.0);
  auto fast = rfft_mag(x);
  auto slow = naive_magnitude(x);
  EXPECT_NEAR(fast[100], 2048.0, 1e-9);
  for (std::size_t k = 0; k < fast.size(); ++k) {
    if (k != 100) EXPECT_LT(fast[k], 1e-9) << k;
    EXPECT_NEAR(fast[k], slow[k], 1e-9);
  }
}

TEST(Spectrum, ImpulseFeatureIsLogTwo) {
  std::vector<double> delta(4096, 0.0);
  delta[0] = 1.0;
  for (double v : lognorm(rfft_mag(delta))) EXPECT_NEAR(v, std::numbers::ln2, 1e-15);
  EXPECT_EQ(lognorm(std::vector<double>{std::numbers::e - 1.0})[0], 1.0);
}

TEST(Features, ZeroSegmentGivesZeroVector) {
  Segment z;
  z.samples.assign(4096, 0.0);
  for (auto mode : {FeatureMode::kNoise, FeatureMode::kRaw})
    for (double v : featurize(z, mode, DenoiseConfig{}).values) EXPECT_EQ(v, 0.0);
}

TEST(Features, NoiseAndRawDifferOnSpeech) {
  CorpusSpec spec;
  spec.duration_seconds = 1.0;
  auto rec = synth_recording(spec, 4, 0);
  auto segs = segment_recording(rec, 4, 1);
  auto noise = build_matrix(segs, FeatureMode::kNoise, DenoiseConfig{});
  auto raw = build_matrix(segs, FeatureMode::kRaw, DenoiseConfig{});
  EXPECT_GT((noise.values - raw.values).norm(), 1.0);
  EXPECT_EQ(build_matrix(segs, FeatureMode::kNoise, DenoiseConfig{}).values, noise.values);
  std::vector<Segment> one{segs[0]};
  auto single = build_matrix(one, FeatureMode::kRaw, DenoiseConfig{});
  EXPECT_EQ(single.values.cols(), 1);
  EXPECT_EQ(single.values.rows(), 2049);
}

}  // namespace
}  // namespace adid

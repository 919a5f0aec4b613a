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

#include "adid/features.hpp"

#include <algorithm>
#include <string>

#include "adid/denoise.hpp"
#include "adid/error.hpp"
#include "adid/spectrum.hpp"

namespace adid {

std::string_view feature_mode_name(FeatureMode mode) { return mode == FeatureMode::kNoise ? "noise" : "raw"; }

FeatureMode parse_feature_mode(std::string_view name) {
  if (name == "noise") return FeatureMode::kNoise;
  if (name == "raw") return FeatureMode::kRaw;
  fail(ErrorKind::kConfig, "unknown feature mode '" + std::string(name) + "'");
}

int FeatureMatrix::class_count() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

FeatureVector featurize(const Segment& segment, FeatureMode mode, const DenoiseConfig& config) {
  if (segment.samples.size() != kSegmentLength)
    fail(ErrorKind::kShape, "segment must have 4096 samples, got " + std::to_string(segment.samples.size()));
  const auto e = mode == FeatureMode::kNoise ? extract_noise(segment.samples, config)
                                             : passthrough(segment.samples);
  return {lognorm(rfft_mag(e)), segment.device_label};
}

FeatureMatrix build_matrix(std::span<const Segment> segments, FeatureMode mode,
                           const DenoiseConfig& config) {
  if (segments.empty()) fail(ErrorKind::kEmptyInput, "no segments to featurize");
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(kFeatureDim), static_cast<Eigen::Index>(segments.size()));
  m.labels.reserve(segments.size());
  for (std::size_t j = 0; j < segments.size(); ++j) {
    FeatureVector v = featurize(segments[j], mode, config);
    m.values.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(v.values.data(), v.values.size());
    m.labels.push_back(v.device_label);
  }
  return m;
}

FeatureMatrix waveform_matrix(std::span<const Segment> segments) {
  if (segments.empty()) fail(ErrorKind::kEmptyInput, "no segments");
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(kSegmentLength), static_cast<Eigen::Index>(segments.size()));
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const auto& s = segments[j].samples;
    if (s.size() != kSegmentLength) fail(ErrorKind::kShape, "segment must have 4096 samples");
    m.values.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
    m.labels.push_back(segments[j].device_label);
  }
  return m;
}

Eigen::VectorXd global_histogram(const FeatureMatrix& matrix) { return matrix.values.rowwise().sum(); }

}  // namespace adid

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

#include <Eigen/Core>
#include <span>
#include <string_view>
#include <vector>

#include "adid/corpus.hpp"
#include "adid/wavelet.hpp"

namespace adid {

inline constexpr std::size_t kFeatureDim = 2049;

enum class FeatureMode { kNoise, kRaw };

std::string_view feature_mode_name(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view name);

struct FeatureVector {
  std::vector<double> values;
  int device_label = 0;
};

/// Column j holds sample j; labels[j] is its class. Spectral matrices have
/// 2049 rows, waveform matrices (CNN input) have 4096.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<int> labels;

  std::size_t dim() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t size() const { return labels.size(); }
  int class_count() const;
};

/// noise: ln(1 + |FFT(s - denoise(s))|); raw: ln(1 + |FFT(s)|).
FeatureVector featurize(const Segment& segment, FeatureMode mode, const DenoiseConfig& config);

FeatureMatrix build_matrix(std::span<const Segment> segments, FeatureMode mode,
                           const DenoiseConfig& config);

/// Time-domain segments stacked as columns, for the convolutional model.
FeatureMatrix waveform_matrix(std::span<const Segment> segments);

/// Sum of all feature columns: the recording-level coefficient histogram.
/// Diagnostic only; classifiers work on per-segment columns.
Eigen::VectorXd global_histogram(const FeatureMatrix& matrix);

}  // namespace adid

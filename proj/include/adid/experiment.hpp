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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adid/corpus.hpp"
#include "adid/eval.hpp"
#include "adid/features.hpp"
#include "adid/model_io.hpp"
#include "adid/train_config.hpp"
#include "adid/wavelet.hpp"

namespace adid {

enum class Classifier { kSoftmax, kMlp, kMlpAveraged, kCnn };

std::string_view classifier_name(Classifier c);
Classifier parse_classifier(std::string_view name);

/// What a model consumes: spectral features (noise or raw) or the raw
/// waveform itself (convolutional model).
enum class Representation { kNoiseSpectrum, kRawSpectrum, kWaveform };

struct GridConfig {
  std::vector<int> hidden_layers{1, 2, 3};
  std::vector<int> averaged_hidden_layers{1, 2, 3};
  std::vector<int> voters{1, 3, 4, 5};
  int voting_hidden_layers = 3;
  bool include_cnn = true;
};

struct ExperimentConfig {
  CorpusSpec corpus;
  DenoiseConfig denoise;
  FeatureMode feature_mode = FeatureMode::kNoise;
  Classifier classifier = Classifier::kMlp;
  int mlp_hidden_layers = 3;
  std::size_t hidden_width = 256;
  std::size_t chunk_count = 4;
  int voters = 1;
  TrainConfig train;                                    // MLP variants
  TrainConfig softmax_train = TrainConfig::softmax_defaults();
  TrainConfig cnn_train;
  GridConfig grid;
  std::filesystem::path output_dir = "out";

  void validate() const;
  Representation representation() const;
  /// [2049, hidden x mlp_hidden_layers, classes]
  std::vector<std::size_t> layer_sizes(int class_count) const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);

/// Streams recordings of one role from the manifest into a matrix, one
/// column per segment, without holding the segments themselves.
FeatureMatrix build_corpus_matrix(const Manifest& manifest, Role role, std::size_t per_recording,
                                  std::uint64_t corpus_seed, Representation rep, const DenoiseConfig& denoise,
                                  std::size_t voter = 0);

struct IngestRow {
  std::string path;
  int device_label = 0;
  Role role = Role::kTrain;
  std::uint32_t sample_rate = 0;
  std::size_t samples = 0;
};

/// Loads and validates every manifest entry.
std::vector<IngestRow> ingest(const Manifest& manifest);
void write_ingest_table(const std::vector<IngestRow>& rows, const std::filesystem::path& path);

struct FeaturizeResult {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::size_t train_columns = 0;
  std::size_t test_columns = 0;
};

/// Writes `train.adfm` and `test.adfm` into the output directory.
FeaturizeResult featurize_corpus(const Manifest& manifest, const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

struct TrainResult {
  Model model;
  std::vector<double> loss_history;  // per epoch (per step for softmax, including the initial cost)
  double final_loss = 0.0;
};

TrainResult train_model(const FeatureMatrix& train, int class_count, const ExperimentConfig& config);

EvalReport evaluate_model(const Model& model, const FeatureMatrix& test, int class_count);

struct VoteResult {
  double accuracy = 0.0;
  std::vector<int> predictions;
  std::vector<int> truth;
};

/// For every test recording, draws `voters` independent segment sets of the
/// configured test size; trial t votes over segment t of each set.
VoteResult vote_evaluate(const Model& model, const Manifest& manifest, int voters, const ExperimentConfig& config);

struct GridRow {
  std::string configuration;
  double accuracy = 0.0;
};

/// Runs the classifier comparison grid on a synthesized corpus and writes
/// `grid.csv` plus one model file per trained configuration into out_dir.
std::vector<GridRow> run_grid(const Manifest& manifest, const ExperimentConfig& config,
                              const std::filesystem::path& out_dir, std::ostream* log = nullptr);

void write_grid_csv(const std::vector<GridRow>& rows, const std::filesystem::path& path);

}  // namespace adid

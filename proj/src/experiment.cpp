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

#include "adid/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "adid/error.hpp"
#include "adid/mlp.hpp"
#include "adid/vote.hpp"
#include "adid/feature_io.hpp"
#include "json.hpp"

namespace adid {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> known, std::string_view where) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) fail(ErrorKind::kConfig, "unknown key '" + key + "' in " + std::string(where));
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      fail(ErrorKind::kConfig, std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

json train_to_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate}, {"epochs", t.epochs},   {"batch_size", t.batch_size},
          {"seed", t.seed},                   {"lambda", t.lambda},   {"loss", std::string(loss_name(t.loss))}};
}

void train_from_json(const json& j, TrainConfig& t, std::string_view where) {
  reject_unknown(j, {"learning_rate", "epochs", "batch_size", "seed", "lambda", "loss"}, where);
  read_opt(j, "learning_rate", t.learning_rate);
  read_opt(j, "epochs", t.epochs);
  read_opt(j, "batch_size", t.batch_size);
  read_opt(j, "seed", t.seed);
  read_opt(j, "lambda", t.lambda);
  std::string loss(loss_name(t.loss));
  read_opt(j, "loss", loss);
  t.loss = parse_loss(loss);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void log_line(std::ostream* log, const std::string& text) {
  if (log) *log << text << std::endl;
}

}  // namespace

std::string_view classifier_name(Classifier c) {
  switch (c) {
    case Classifier::kSoftmax: return "softmax";
    case Classifier::kMlp: return "mlp";
    case Classifier::kMlpAveraged: return "mlp-averaged";
    case Classifier::kCnn: return "cnn";
  }
  return "?";
}

Classifier parse_classifier(std::string_view name) {
  if (name == "softmax") return Classifier::kSoftmax;
  if (name == "mlp") return Classifier::kMlp;
  if (name == "mlp-averaged") return Classifier::kMlpAveraged;
  if (name == "cnn") return Classifier::kCnn;
  fail(ErrorKind::kConfig, "unknown classifier '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  corpus.validate();
  denoise.validate();
  if (mlp_hidden_layers < 1 || mlp_hidden_layers > 3)
    fail(ErrorKind::kConfig, "mlp_hidden_layers must be 1 to 3, got " + std::to_string(mlp_hidden_layers));
  if (hidden_width == 0) fail(ErrorKind::kConfig, "hidden_width must be positive");
  if (classifier == Classifier::kMlpAveraged && chunk_count < 2)
    fail(ErrorKind::kConfig, "chunk_count must be at least 2");
  if (voters < 1) fail(ErrorKind::kConfig, "voters must be at least 1");
  train.validate();
  softmax_train.validate();
  cnn_train.validate();
  for (int h : grid.hidden_layers)
    if (h < 1 || h > 3) fail(ErrorKind::kConfig, "grid hidden_layers entries must be 1 to 3");
  for (int h : grid.averaged_hidden_layers)
    if (h < 1 || h > 3) fail(ErrorKind::kConfig, "grid averaged_hidden_layers entries must be 1 to 3");
  for (int v : grid.voters)
    if (v < 1) fail(ErrorKind::kConfig, "grid voters entries must be at least 1");
  if (grid.voting_hidden_layers < 1 || grid.voting_hidden_layers > 3)
    fail(ErrorKind::kConfig, "grid voting_hidden_layers must be 1 to 3");
}

Representation ExperimentConfig::representation() const {
  if (classifier == Classifier::kCnn) return Representation::kWaveform;
  return feature_mode == FeatureMode::kNoise ? Representation::kNoiseSpectrum : Representation::kRawSpectrum;
}

std::vector<std::size_t> ExperimentConfig::layer_sizes(int class_count) const {
  std::vector<std::size_t> sizes{kFeatureDim};
  for (int i = 0; i < mlp_hidden_layers; ++i) sizes.push_back(hidden_width);
  sizes.push_back(static_cast<std::size_t>(class_count));
  return sizes;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j = {
      {"corpus",
       {{"device_count", c.corpus.device_count},
        {"train_segments_per_recording", c.corpus.train_segments_per_recording},
        {"test_segments_per_recording", c.corpus.test_segments_per_recording},
        {"recordings_per_device_train", c.corpus.recordings_per_device_train},
        {"recordings_per_device_test", c.corpus.recordings_per_device_test},
        {"seed", c.corpus.seed},
        {"duration_seconds", c.corpus.duration_seconds},
        {"sample_rate", c.corpus.sample_rate}}},
      {"denoise",
       {{"wavelet", std::string(wavelet_name(c.denoise.wavelet))},
        {"levels", c.denoise.levels},
        {"threshold_rule", "universal"},
        {"threshold_mode", std::string(threshold_mode_name(c.denoise.threshold_mode))}}},
      {"feature_mode", std::string(feature_mode_name(c.feature_mode))},
      {"classifier", std::string(classifier_name(c.classifier))},
      {"mlp_hidden_layers", c.mlp_hidden_layers},
      {"hidden_width", c.hidden_width},
      {"chunk_count", c.chunk_count},
      {"voters", c.voters},
      {"train", train_to_json(c.train)},
      {"softmax_train", train_to_json(c.softmax_train)},
      {"cnn_train", train_to_json(c.cnn_train)},
      {"grid",
       {{"hidden_layers", c.grid.hidden_layers},
        {"averaged_hidden_layers", c.grid.averaged_hidden_layers},
        {"voters", c.grid.voters},
        {"voting_hidden_layers", c.grid.voting_hidden_layers},
        {"include_cnn", c.grid.include_cnn}}},
      {"output_dir", c.output_dir.string()},
  };
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::kConfig, "config must be a JSON object");
  reject_unknown(j,
                 {"corpus", "denoise", "feature_mode", "classifier", "mlp_hidden_layers", "hidden_width",
                  "chunk_count", "voters", "train", "softmax_train", "cnn_train", "grid", "output_dir"},
                 "config");
  ExperimentConfig c;
  if (auto it = j.find("corpus"); it != j.end()) {
    reject_unknown(*it,
                   {"device_count", "train_segments_per_recording", "test_segments_per_recording",
                    "recordings_per_device_train", "recordings_per_device_test", "seed", "duration_seconds",
                    "sample_rate"},
                   "corpus");
    read_opt(*it, "device_count", c.corpus.device_count);
    read_opt(*it, "train_segments_per_recording", c.corpus.train_segments_per_recording);
    read_opt(*it, "test_segments_per_recording", c.corpus.test_segments_per_recording);
    read_opt(*it, "recordings_per_device_train", c.corpus.recordings_per_device_train);
    read_opt(*it, "recordings_per_device_test", c.corpus.recordings_per_device_test);
    read_opt(*it, "seed", c.corpus.seed);
    read_opt(*it, "duration_seconds", c.corpus.duration_seconds);
    read_opt(*it, "sample_rate", c.corpus.sample_rate);
  }
  if (auto it = j.find("denoise"); it != j.end()) {
    reject_unknown(*it, {"wavelet", "levels", "threshold_rule", "threshold_mode"}, "denoise");
    std::string wavelet(wavelet_name(c.denoise.wavelet)), mode(threshold_mode_name(c.denoise.threshold_mode)),
        rule = "universal";
    read_opt(*it, "wavelet", wavelet);
    read_opt(*it, "levels", c.denoise.levels);
    read_opt(*it, "threshold_rule", rule);
    read_opt(*it, "threshold_mode", mode);
    if (rule != "universal") fail(ErrorKind::kConfig, "unknown threshold rule '" + rule + "'");
    c.denoise.wavelet = parse_wavelet(wavelet);
    c.denoise.threshold_mode = parse_threshold_mode(mode);
  }
  std::string mode(feature_mode_name(c.feature_mode)), classifier(classifier_name(c.classifier));
  read_opt(j, "feature_mode", mode);
  read_opt(j, "classifier", classifier);
  c.feature_mode = parse_feature_mode(mode);
  c.classifier = parse_classifier(classifier);
  read_opt(j, "mlp_hidden_layers", c.mlp_hidden_layers);
  read_opt(j, "hidden_width", c.hidden_width);
  read_opt(j, "chunk_count", c.chunk_count);
  read_opt(j, "voters", c.voters);
  if (auto it = j.find("train"); it != j.end()) train_from_json(*it, c.train, "train");
  if (auto it = j.find("softmax_train"); it != j.end()) train_from_json(*it, c.softmax_train, "softmax_train");
  if (auto it = j.find("cnn_train"); it != j.end()) train_from_json(*it, c.cnn_train, "cnn_train");
  if (auto it = j.find("grid"); it != j.end()) {
    reject_unknown(*it, {"hidden_layers", "averaged_hidden_layers", "voters", "voting_hidden_layers", "include_cnn"},
                   "grid");
    read_opt(*it, "hidden_layers", c.grid.hidden_layers);
    read_opt(*it, "averaged_hidden_layers", c.grid.averaged_hidden_layers);
    read_opt(*it, "voters", c.grid.voters);
    read_opt(*it, "voting_hidden_layers", c.grid.voting_hidden_layers);
    read_opt(*it, "include_cnn", c.grid.include_cnn);
  }
  std::string out = c.output_dir.string();
  read_opt(j, "output_dir", out);
  c.output_dir = out;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << config_to_json(config);
}

FeatureMatrix build_corpus_matrix(const Manifest& manifest, Role role, std::size_t per_recording,
                                  std::uint64_t corpus_seed, Representation rep, const DenoiseConfig& denoise,
                                  std::size_t voter) {
  const int k = manifest.class_count();
  std::size_t recordings = 0;
  for (const auto& e : manifest.entries) recordings += e.role == role ? 1 : 0;
  if (recordings == 0) fail(ErrorKind::kEmptyInput, "manifest has no " + std::string(role_name(role)) + " entries");

  const Eigen::Index rows = rep == Representation::kWaveform ? static_cast<Eigen::Index>(kSegmentLength)
                                                             : static_cast<Eigen::Index>(kFeatureDim);
  FeatureMatrix m;
  m.values.resize(rows, static_cast<Eigen::Index>(recordings * per_recording));
  m.labels.reserve(recordings * per_recording);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.role != role) continue;
    const auto path = manifest.resolve(e);
    if (!std::filesystem::exists(path)) fail(ErrorKind::kIo, "missing recording " + path.string());
    Recording rec = load_wav(path, e.device_label);
    validate_recording(rec, k);
    const auto segments = segment_recording(rec, per_recording, recording_segment_seed(corpus_seed, i, voter));
    FeatureMatrix part = rep == Representation::kWaveform
                             ? waveform_matrix(segments)
                             : build_matrix(segments,
                                            rep == Representation::kNoiseSpectrum ? FeatureMode::kNoise : FeatureMode::kRaw,
                                            denoise);
    m.values.middleCols(col, part.values.cols()) = part.values;
    m.labels.insert(m.labels.end(), part.labels.begin(), part.labels.end());
    col += part.values.cols();
  }
  return m;
}

std::vector<IngestRow> ingest(const Manifest& manifest) {
  if (manifest.entries.empty()) fail(ErrorKind::kEmptyInput, "manifest has no entries");
  const int k = manifest.class_count();
  std::vector<IngestRow> rows;
  for (const auto& e : manifest.entries) {
    const auto path = manifest.resolve(e);
    if (!std::filesystem::exists(path)) fail(ErrorKind::kIo, "missing recording " + path.string());
    Recording rec = load_wav(path, e.device_label);
    validate_recording(rec, k);
    if (rec.samples.size() < kSegmentLength)
      fail(ErrorKind::kTooShort, path.string() + " is shorter than one segment");
    rows.push_back({e.path, e.device_label, e.role, rec.sample_rate, rec.samples.size()});
  }
  return rows;
}

void write_ingest_table(const std::vector<IngestRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "path\tdevice_label\trole\tsample_rate\tsamples\tseconds\n";
  for (const auto& r : rows)
    out << r.path << '\t' << r.device_label << '\t' << role_name(r.role) << '\t' << r.sample_rate << '\t'
        << r.samples << '\t' << fixed(static_cast<double>(r.samples) / r.sample_rate, 3) << '\n';
}

FeaturizeResult featurize_corpus(const Manifest& manifest, const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir) {
  config.validate();
  if (manifest.entries.empty()) fail(ErrorKind::kEmptyInput, "manifest has no entries");
  std::filesystem::create_directories(out_dir);
  FeaturizeResult r;
  r.train_path = out_dir / "train.adfm";
  r.test_path = out_dir / "test.adfm";
  {
    auto train = build_corpus_matrix(manifest, Role::kTrain, config.corpus.train_segments_per_recording,
                                     config.corpus.seed, config.representation(), config.denoise);
    r.train_columns = train.size();
    write_feature_file(r.train_path, train);
  }
  auto test = build_corpus_matrix(manifest, Role::kTest, config.corpus.test_segments_per_recording,
                                  config.corpus.seed, config.representation(), config.denoise);
  r.test_columns = test.size();
  write_feature_file(r.test_path, test);
  return r;
}

TrainResult train_model(const FeatureMatrix& train, int class_count, const ExperimentConfig& config) {
  config.validate();
  if (train.size() == 0) fail(ErrorKind::kEmptyInput, "no training samples");
  const bool waveform = config.classifier == Classifier::kCnn;
  if (waveform && train.dim() != kSegmentLength)
    fail(ErrorKind::kShape, "convolutional model needs 4096-sample waveform columns, got dimension " +
                                std::to_string(train.dim()));
  if (!waveform && train.dim() != kFeatureDim)
    fail(ErrorKind::kShape, "spectral model needs dimension 2049, got " + std::to_string(train.dim()));

  TrainResult r;
  switch (config.classifier) {
    case Classifier::kSoftmax:
      r.model = softmax_train(train.values, train.labels, class_count, config.softmax_train, &r.loss_history);
      break;
    case Classifier::kMlp: {
      const auto sizes = config.layer_sizes(class_count);
      r.model = mlp_train(train.values, train.labels, sizes, config.train, &r.loss_history);
      break;
    }
    case Classifier::kMlpAveraged: {
      const auto sizes = config.layer_sizes(class_count);
      r.model = mlp_train_averaged(train.values, train.labels, config.chunk_count, sizes, config.train, &r.loss_history);
      break;
    }
    case Classifier::kCnn:
      r.model = cnn_train(train.values, train.labels, class_count, config.cnn_train, {}, &r.loss_history);
      break;
  }
  r.final_loss = r.loss_history.empty() ? 0.0 : r.loss_history.back();
  return r;
}

EvalReport evaluate_model(const Model& model, const FeatureMatrix& test, int class_count) {
  if (test.size() == 0) fail(ErrorKind::kEmptyInput, "empty test set");
  return evaluate(predict_labels(model, test.values), test.labels, class_count);
}

VoteResult vote_evaluate(const Model& model, const Manifest& manifest, int voters, const ExperimentConfig& config) {
  if (voters < 1) fail(ErrorKind::kConfig, "voters must be at least 1");
  const Representation rep = std::holds_alternative<CnnModel>(model) ? Representation::kWaveform
                                                                      : config.representation() == Representation::kWaveform
                                                                            ? Representation::kNoiseSpectrum
                                                                            : config.representation();
  const std::size_t trials = config.corpus.test_segments_per_recording;
  const int k = manifest.class_count();
  if (model_class_count(model) != k)
    fail(ErrorKind::kShape, "model has " + std::to_string(model_class_count(model)) + " classes, manifest " +
                                std::to_string(k));
  VoteResult r;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.role != Role::kTest) continue;
    // Seeds follow the entry index so voter 0 reproduces the ordinary test matrix.
    std::vector<Eigen::MatrixXd> probs;
    Recording rec = load_wav(manifest.resolve(e), e.device_label);
    validate_recording(rec, k);
    for (int v = 0; v < voters; ++v) {
      const auto segments = segment_recording(rec, trials, recording_segment_seed(config.corpus.seed, i, static_cast<std::size_t>(v)));
      FeatureMatrix fm = rep == Representation::kWaveform
                             ? waveform_matrix(segments)
                             : build_matrix(segments,
                                            rep == Representation::kNoiseSpectrum ? FeatureMode::kNoise : FeatureMode::kRaw,
                                            config.denoise);
      probs.push_back(predict_batch(model, fm.values));
    }
    std::vector<Eigen::VectorXd> ballot(static_cast<std::size_t>(voters));
    for (std::size_t t = 0; t < trials; ++t) {
      for (int v = 0; v < voters; ++v) ballot[static_cast<std::size_t>(v)] = probs[static_cast<std::size_t>(v)].col(static_cast<Eigen::Index>(t));
      const int winner = vote(ballot);
      r.predictions.push_back(winner);
      r.truth.push_back(e.device_label);
      correct += winner == e.device_label ? 1 : 0;
    }
  }
  if (r.truth.empty()) fail(ErrorKind::kEmptyInput, "manifest has no test entries");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.truth.size());
  return r;
}

void write_grid_csv(const std::vector<GridRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "configuration,accuracy\n";
  for (const auto& r : rows) out << r.configuration << ',' << fixed(r.accuracy, 6) << '\n';
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

std::vector<GridRow> run_grid(const Manifest& manifest, const ExperimentConfig& config,
                              const std::filesystem::path& out_dir, std::ostream* log) {
  config.validate();
  if (manifest.entries.empty()) fail(ErrorKind::kEmptyInput, "manifest has no entries");
  const int k = manifest.class_count();
  const auto models_dir = out_dir / "models";
  std::filesystem::create_directories(models_dir);
  std::vector<GridRow> rows;
  std::map<std::string, Model> kept;

  auto run = [&](const std::string& name, ExperimentConfig c, const FeatureMatrix& train, const FeatureMatrix& test) {
    TrainResult tr = train_model(train, k, c);
    save_model(tr.model, models_dir / (name + ".adid"));
    const double acc = evaluate_model(tr.model, test, k).accuracy;
    rows.push_back({name, acc});
    log_line(log, name + " accuracy=" + fixed(acc, 4) + " final_loss=" + fixed(tr.final_loss, 6));
    return tr.model;
  };

  for (FeatureMode mode : {FeatureMode::kNoise, FeatureMode::kRaw}) {
    ExperimentConfig c = config;
    c.feature_mode = mode;
    const std::string suffix = "_" + std::string(feature_mode_name(mode));
    const auto rep = c.representation();
    const FeatureMatrix train = build_corpus_matrix(manifest, Role::kTrain, c.corpus.train_segments_per_recording,
                                                    c.corpus.seed, rep, c.denoise);
    const FeatureMatrix test = build_corpus_matrix(manifest, Role::kTest, c.corpus.test_segments_per_recording,
                                                   c.corpus.seed, rep, c.denoise);
    log_line(log, "featurized " + std::string(feature_mode_name(mode)) + ": " + std::to_string(train.size()) +
                      " train / " + std::to_string(test.size()) + " test");

    c.classifier = Classifier::kSoftmax;
    run("softmax" + suffix, c, train, test);
    std::set<int> hidden(config.grid.hidden_layers.begin(), config.grid.hidden_layers.end());
    if (mode == FeatureMode::kNoise) hidden.insert(config.grid.voting_hidden_layers);
    for (int h : hidden) {
      c.classifier = Classifier::kMlp;
      c.mlp_hidden_layers = h;
      const std::string name = "mlp" + std::to_string(h) + suffix;
      kept.emplace(name, run(name, c, train, test));
    }
    if (mode == FeatureMode::kNoise) {
      for (int h : config.grid.averaged_hidden_layers) {
        c.classifier = Classifier::kMlpAveraged;
        c.mlp_hidden_layers = h;
        run("mlp" + std::to_string(h) + "-averaged" + suffix, c, train, test);
      }
    }
  }

  if (config.grid.include_cnn) {
    ExperimentConfig c = config;
    c.classifier = Classifier::kCnn;
    const FeatureMatrix train = build_corpus_matrix(manifest, Role::kTrain, c.corpus.train_segments_per_recording,
                                                    c.corpus.seed, Representation::kWaveform, c.denoise);
    const FeatureMatrix test = build_corpus_matrix(manifest, Role::kTest, c.corpus.test_segments_per_recording,
                                                   c.corpus.seed, Representation::kWaveform, c.denoise);
    run("cnn_raw", c, train, test);
  }

  if (!config.grid.voters.empty()) {
    const std::string base = "mlp" + std::to_string(config.grid.voting_hidden_layers) + "_noise";
    ExperimentConfig c = config;
    c.feature_mode = FeatureMode::kNoise;
    c.classifier = Classifier::kMlp;
    for (int v : config.grid.voters) {
      const double acc = vote_evaluate(kept.at(base), manifest, v, c).accuracy;
      const std::string name = "vote" + std::to_string(v) + "_" + base;
      rows.push_back({name, acc});
      log_line(log, name + " accuracy=" + fixed(acc, 4));
    }
  }

  write_grid_csv(rows, out_dir / "grid.csv");
  return rows;
}

}  // namespace adid

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

// Batch front end: synth, ingest, featurize, train, evaluate, vote-eval, grid.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "adid/error.hpp"
#include "adid/experiment.hpp"
#include "adid/feature_io.hpp"
#include "adid/model_io.hpp"
#include "adid/synth.hpp"

namespace fs = std::filesystem;
using namespace adid;

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

/// Per-run overrides layered on top of the config file.
struct Overrides {
  ExperimentConfig defaults;
  std::string classifier{classifier_name(defaults.classifier)};
  std::string feature_mode{feature_mode_name(defaults.feature_mode)};
  int hidden_layers = defaults.mlp_hidden_layers;
  std::size_t hidden_width = defaults.hidden_width;
  std::size_t chunks = defaults.chunk_count;
  int epochs = defaults.train.epochs;
  double learning_rate = defaults.train.learning_rate;
  std::size_t batch_size = defaults.train.batch_size;
  std::vector<CLI::Option*> opts;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config (defaults are used for absent keys)");
  f.seed_opt = app->add_option("--seed", f.seed, "Seed for corpus synthesis, segmentation and training")
                   ->capture_default_str();
  f.out_opt = app->add_option("--out", f.out, "Output directory")->default_str("out");
}

void add_model_overrides(CLI::App* app, Overrides& o) {
  o.opts.push_back(app->add_option("--classifier", o.classifier, "softmax | mlp | mlp-averaged | cnn")
                       ->capture_default_str()
                       ->check(CLI::IsMember({"softmax", "mlp", "mlp-averaged", "cnn"})));
  o.opts.push_back(app->add_option("--feature-mode", o.feature_mode, "noise | raw")
                       ->capture_default_str()
                       ->check(CLI::IsMember({"noise", "raw"})));
  o.opts.push_back(app->add_option("--hidden-layers", o.hidden_layers, "MLP hidden layer count (1-3)")->capture_default_str());
  o.opts.push_back(app->add_option("--hidden-width", o.hidden_width, "Units per hidden layer")->capture_default_str());
  o.opts.push_back(app->add_option("--chunks", o.chunks, "Input chunks for mlp-averaged")->capture_default_str());
  o.opts.push_back(app->add_option("--epochs", o.epochs, "Training epochs (softmax: gradient steps)")->capture_default_str());
  o.opts.push_back(app->add_option("--learning-rate", o.learning_rate, "Learning rate (softmax default 0.5)")->capture_default_str());
  o.opts.push_back(app->add_option("--batch-size", o.batch_size, "Mini-batch size")->capture_default_str());
}

ExperimentConfig resolve(const CommonFlags& f, const Overrides* o) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (f.seed_opt && f.seed_opt->count()) {
    c.corpus.seed = f.seed;
    c.train.seed = c.softmax_train.seed = c.cnn_train.seed = f.seed;
  }
  if (f.out_opt && f.out_opt->count()) c.output_dir = f.out;
  if (o) {
    auto set = [&](std::size_t i) { return o->opts.size() > i && o->opts[i]->count() > 0; };
    if (set(0)) c.classifier = parse_classifier(o->classifier);
    if (set(1)) c.feature_mode = parse_feature_mode(o->feature_mode);
    if (set(2)) c.mlp_hidden_layers = o->hidden_layers;
    if (set(3)) c.hidden_width = o->hidden_width;
    if (set(4)) c.chunk_count = o->chunks;
    if (set(5)) {
      c.train.epochs = c.cnn_train.epochs = o->epochs;
      if (c.classifier == Classifier::kSoftmax) c.softmax_train.epochs = o->epochs;
    }
    if (set(6)) {
      c.train.learning_rate = c.cnn_train.learning_rate = o->learning_rate;
      if (c.classifier == Classifier::kSoftmax) c.softmax_train.learning_rate = o->learning_rate;
    }
    if (set(7)) c.train.batch_size = c.cnn_train.batch_size = o->batch_size;
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio recording device identification from background noise"};
  app.require_subcommand(1);

  CommonFlags synth_f, ingest_f, feat_f, train_f, eval_f, vote_f, grid_f;
  Overrides feat_o, train_o, eval_o, vote_o, grid_o;
  std::string manifest, features, model_path, test_features;
  int devices = 9, voters = 1;

  auto* synth = app.add_subcommand("synth", "Synthesize a labeled multi-device corpus (WAV + manifest.tsv)");
  add_common(synth, synth_f);
  auto* devices_opt = synth->add_option("--devices", devices, "Number of synthetic devices")->capture_default_str();

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate the recordings of a manifest and tabulate them");
  add_common(ingest_cmd, ingest_f);
  ingest_cmd->add_option("--manifest", manifest, "Manifest TSV (path, label, role)")->required();

  auto* feat = app.add_subcommand("featurize", "Write train.adfm / test.adfm feature matrices");
  add_common(feat, feat_f);
  add_model_overrides(feat, feat_o);
  feat->add_option("--manifest", manifest, "Manifest TSV")->required();

  auto* train = app.add_subcommand("train", "Train a classifier and write model.adid");
  add_common(train, train_f);
  add_model_overrides(train, train_o);
  auto* train_features = train->add_option("--features", features, "Training ADFM file");
  auto* train_manifest = train->add_option("--manifest", manifest, "Manifest TSV (featurized on the fly)");
  train_features->excludes(train_manifest);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a model on test features; prints accuracy=<value>");
  add_common(evaluate_cmd, eval_f);
  add_model_overrides(evaluate_cmd, eval_o);
  evaluate_cmd->add_option("--model", model_path, "ADID model file")->required();
  evaluate_cmd->add_option("--features", test_features, "Test ADFM file")->required();

  auto* vote_cmd = app.add_subcommand("vote-eval", "Voting evaluation over fresh segment sets; prints accuracy=<value>");
  add_common(vote_cmd, vote_f);
  add_model_overrides(vote_cmd, vote_o);
  vote_cmd->add_option("--model", model_path, "ADID model file")->required();
  vote_cmd->add_option("--manifest", manifest, "Manifest TSV")->required();
  vote_cmd->add_option("--voters", voters, "Number of voters V")->capture_default_str();

  auto* grid = app.add_subcommand("grid", "Run the classifier comparison grid; writes grid.csv");
  add_common(grid, grid_f);
  add_model_overrides(grid, grid_o);
  grid->add_option("--manifest", manifest, "Existing corpus manifest (synthesized into <out>/corpus if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      ExperimentConfig c = resolve(synth_f, nullptr);
      if (devices_opt->count()) c.corpus.device_count = devices;
      c.validate();
      const auto path = synth_corpus(c.corpus, c.output_dir);
      std::cout << "manifest=" << path.string() << "\n"
                << "train_segments=" << c.corpus.train_segment_total()
                << " test_segments=" << c.corpus.test_segment_total() << "\n";
    } else if (ingest_cmd->parsed()) {
      ExperimentConfig c = resolve(ingest_f, nullptr);
      const auto rows = ingest(read_manifest(manifest));
      fs::create_directories(c.output_dir);
      write_ingest_table(rows, c.output_dir / "ingest.tsv");
      std::size_t train_n = 0, test_n = 0;
      for (const auto& r : rows) (r.role == Role::kTrain ? train_n : test_n) += 1;
      std::cout << "recordings=" << rows.size() << " train=" << train_n << " test=" << test_n
                << " table=" << (c.output_dir / "ingest.tsv").string() << "\n";
    } else if (feat->parsed()) {
      ExperimentConfig c = resolve(feat_f, &feat_o);
      const auto r = featurize_corpus(read_manifest(manifest), c, c.output_dir);
      std::cout << "train=" << r.train_path.string() << " columns=" << r.train_columns << "\n"
                << "test=" << r.test_path.string() << " columns=" << r.test_columns << "\n";
    } else if (train->parsed()) {
      ExperimentConfig c = resolve(train_f, &train_o);
      FeatureMatrix data;
      int k = 0;
      if (!features.empty()) {
        data = read_feature_file(features);
        k = data.class_count();
      } else if (!manifest.empty()) {
        const Manifest m = read_manifest(manifest);
        data = build_corpus_matrix(m, Role::kTrain, c.corpus.train_segments_per_recording, c.corpus.seed,
                                   c.representation(), c.denoise);
        k = m.class_count();
      } else {
        throw Error(ErrorKind::kConfig, "train needs --features or --manifest");
      }
      const TrainResult r = train_model(data, k, c);
      fs::create_directories(c.output_dir);
      const auto path = c.output_dir / "model.adid";
      save_model(r.model, path);
      std::printf("model=%s\nfinal_loss=%.6f\n", path.string().c_str(), r.final_loss);
    } else if (evaluate_cmd->parsed()) {
      ExperimentConfig c = resolve(eval_f, &eval_o);
      const Model m = load_model(model_path);
      const FeatureMatrix test = read_feature_file(test_features);
      const EvalReport report = evaluate_model(m, test, model_class_count(m));
      fs::create_directories(c.output_dir);
      const auto files = export_report(report, c.output_dir / "report");
      std::printf("accuracy=%.6f\n", report.accuracy);
      std::cout << "metrics=" << files.metrics.string() << " confusion=" << files.confusion.string() << "\n";
    } else if (vote_cmd->parsed()) {
      ExperimentConfig c = resolve(vote_f, &vote_o);
      if (voters < 1) throw Error(ErrorKind::kConfig, "voters must be at least 1");
      const Model m = load_model(model_path);
      const VoteResult r = vote_evaluate(m, read_manifest(manifest), voters, c);
      fs::create_directories(c.output_dir);
      const auto files = export_report(evaluate(r.predictions, r.truth, model_class_count(m)),
                                       c.output_dir / ("vote" + std::to_string(voters)));
      std::printf("accuracy=%.6f\n", r.accuracy);
      std::cout << "metrics=" << files.metrics.string() << "\n";
    } else if (grid->parsed()) {
      ExperimentConfig c = resolve(grid_f, &grid_o);
      fs::path manifest_path = manifest;
      if (manifest_path.empty()) manifest_path = synth_corpus(c.corpus, c.output_dir / "corpus");
      const auto rows = run_grid(read_manifest(manifest_path), c, c.output_dir, &std::cerr);
      std::cout << "grid=" << (c.output_dir / "grid.csv").string() << " rows=" << rows.size() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

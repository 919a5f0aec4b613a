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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace adid {

/// counts(i, j): samples of true class i predicted as j.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::string> class_names;

  int class_count() const { return static_cast<int>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro_average;  // unweighted mean over classes
  ConfusionMatrix confusion;
};

/// Precision and recall with a zero denominator are reported as 0.
EvalReport evaluate(std::span<const int> predicted, std::span<const int> truth, int class_count);

EvalReport evaluate(const std::function<int(const Eigen::Ref<const Eigen::VectorXd>&)>& predict,
                    const Eigen::MatrixXd& inputs, std::span<const int> truth, int class_count);

/// Row-normalized confusion matrix; a row with no samples is an error.
Eigen::MatrixXd normalize_confusion(const ConfusionMatrix& cm);

struct ReportFiles {
  std::filesystem::path metrics;
  std::filesystem::path confusion;
};

/// Writes `<stem>_metrics.csv` (class,precision,recall,f1 plus a macro row)
/// and `<stem>_confusion.csv` (normalized), 4 decimals.
ReportFiles export_report(const EvalReport& report, const std::filesystem::path& stem);

struct ParsedMetrics {
  std::vector<std::string> classes;
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro_average;
};

ParsedMetrics read_metrics_csv(const std::filesystem::path& path);
Eigen::MatrixXd read_confusion_csv(const std::filesystem::path& path);

}  // namespace adid

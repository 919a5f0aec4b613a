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

#include "adid/eval.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adid/error.hpp"

namespace adid {
namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

double parse_number(const std::string& text, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kFormat, "bad number '" + text + "' in " + path.string());
}

}  // namespace

EvalReport evaluate(std::span<const int> predicted, std::span<const int> truth, int class_count) {
  if (truth.empty()) fail(ErrorKind::kEmptyInput, "empty test set");
  if (predicted.size() != truth.size()) fail(ErrorKind::kShape, "prediction and label counts differ");
  if (class_count < 1) fail(ErrorKind::kConfig, "class_count must be positive");

  EvalReport r;
  auto& cm = r.confusion;
  cm.counts.setZero(class_count, class_count);
  for (int c = 0; c < class_count; ++c) cm.class_names.push_back(std::to_string(c));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= class_count || predicted[i] < 0 || predicted[i] >= class_count)
      fail(ErrorKind::kShape, "class id outside [0, " + std::to_string(class_count) + ")");
    ++cm.counts(truth[i], predicted[i]);
  }

  r.accuracy = ratio(cm.counts.trace(), cm.total());
  for (int c = 0; c < class_count; ++c) {
    const std::int64_t tp = cm.counts(c, c);
    ClassMetrics m;
    m.precision = ratio(tp, cm.counts.col(c).sum());
    m.recall = ratio(tp, cm.counts.row(c).sum());
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    r.per_class.push_back(m);
    r.macro_average.precision += m.precision / class_count;
    r.macro_average.recall += m.recall / class_count;
    r.macro_average.f1 += m.f1 / class_count;
  }
  return r;
}

EvalReport evaluate(const std::function<int(const Eigen::Ref<const Eigen::VectorXd>&)>& predict,
                    const Eigen::MatrixXd& inputs, std::span<const int> truth, int class_count) {
  if (static_cast<std::size_t>(inputs.cols()) != truth.size())
    fail(ErrorKind::kShape, "feature and label counts differ");
  std::vector<int> predicted;
  predicted.reserve(truth.size());
  for (Eigen::Index j = 0; j < inputs.cols(); ++j) predicted.push_back(predict(inputs.col(j)));
  return evaluate(predicted, truth, class_count);
}

Eigen::MatrixXd normalize_confusion(const ConfusionMatrix& cm) {
  Eigen::MatrixXd out = cm.counts.cast<double>();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double sum = out.row(i).sum();
    if (sum == 0.0) fail(ErrorKind::kDivision, "class " + std::to_string(i) + " has no samples");
    out.row(i) /= sum;
  }
  return out;
}

ReportFiles export_report(const EvalReport& report, const std::filesystem::path& stem) {
  ReportFiles files{stem.string() + "_metrics.csv", stem.string() + "_confusion.csv"};
  const auto& names = report.confusion.class_names;
  {
    std::ofstream out(files.metrics, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + files.metrics.string());
    out << "class,precision,recall,f1\n";
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
      const auto& m = report.per_class[c];
      out << names[c] << ',' << fixed4(m.precision) << ',' << fixed4(m.recall) << ',' << fixed4(m.f1) << '\n';
    }
    const auto& a = report.macro_average;
    out << "macro," << fixed4(a.precision) << ',' << fixed4(a.recall) << ',' << fixed4(a.f1) << '\n';
    if (!out) fail(ErrorKind::kIo, "write failed for " + files.metrics.string());
  }
  {
    const Eigen::MatrixXd norm = normalize_confusion(report.confusion);
    std::ofstream out(files.confusion, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + files.confusion.string());
    out << "true\\predicted";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (Eigen::Index i = 0; i < norm.rows(); ++i) {
      out << names[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < norm.cols(); ++j) out << ',' << fixed4(norm(i, j));
      out << '\n';
    }
    if (!out) fail(ErrorKind::kIo, "write failed for " + files.confusion.string());
  }
  return files;
}

ParsedMetrics read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "class,precision,recall,f1")
    fail(ErrorKind::kFormat, "unexpected metrics header in " + path.string());
  ParsedMetrics out;
  bool have_macro = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 4) fail(ErrorKind::kFormat, "expected 4 fields in " + path.string());
    ClassMetrics m{parse_number(f[1], path), parse_number(f[2], path), parse_number(f[3], path)};
    if (f[0] == "macro") {
      out.macro_average = m;
      have_macro = true;
    } else {
      out.classes.push_back(f[0]);
      out.per_class.push_back(m);
    }
  }
  if (!have_macro) fail(ErrorKind::kFormat, "missing macro row in " + path.string());
  return out;
}

Eigen::MatrixXd read_confusion_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kFormat, "empty confusion file " + path.string());
  const auto k = static_cast<Eigen::Index>(split_csv(line).size()) - 1;
  Eigen::MatrixXd out(k, k);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (static_cast<Eigen::Index>(f.size()) != k + 1 || row >= k)
      fail(ErrorKind::kFormat, "malformed confusion row in " + path.string());
    for (Eigen::Index j = 0; j < k; ++j) out(row, j) = parse_number(f[static_cast<std::size_t>(j + 1)], path);
    ++row;
  }
  if (row != k) fail(ErrorKind::kFormat, "confusion matrix is not square in " + path.string());
  return out;
}

}  // namespace adid

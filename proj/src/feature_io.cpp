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

#include "adid/feature_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

#include "binary_io.hpp"

namespace adid {

void write_feature_file(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  if (static_cast<std::size_t>(matrix.values.cols()) != matrix.labels.size())
    fail(ErrorKind::kShape, "feature matrix has mismatched labels");
  detail::ByteWriter w;
  w.tag("ADFM");
  w.u32(kFeatureFileVersion);
  w.u32(static_cast<std::uint32_t>(matrix.values.rows()));
  w.u32(static_cast<std::uint32_t>(matrix.values.cols()));
  for (int label : matrix.labels) {
    if (label < 0 || label > std::numeric_limits<std::uint16_t>::max())
      fail(ErrorKind::kConfig, "label does not fit in 16 bits");
    w.u16(static_cast<std::uint16_t>(label));
  }
  w.f64s({matrix.values.data(), static_cast<std::size_t>(matrix.values.size())});
  w.save(path);
}

FeatureMatrix read_feature_file(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  detail::ByteReader r(bytes, path.string());
  if (!r.tag_matches("ADFM")) fail(ErrorKind::kFormat, "bad magic in feature file " + path.string());
  const auto version = r.read<std::uint32_t>();
  if (version != kFeatureFileVersion)
    fail(ErrorKind::kFormat, "unsupported feature file version " + std::to_string(version));
  const auto rows = r.read<std::uint32_t>();
  const auto cols = r.read<std::uint32_t>();
  FeatureMatrix m;
  m.labels.resize(cols);
  for (auto& l : m.labels) l = r.read<std::uint16_t>();
  m.values.resize(rows, cols);
  r.f64s({m.values.data(), static_cast<std::size_t>(m.values.size())});
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes in feature file " + path.string());
  return m;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) out << 'f' << i << ',';
  out << "label\n";
  char buf[32];
  for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,", matrix.values(i, j));
      out << buf;
    }
    out << matrix.labels[static_cast<std::size_t>(j)] << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace adid

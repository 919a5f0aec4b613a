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

#include "adid/features.hpp"

namespace adid {

inline constexpr std::uint32_t kFeatureFileVersion = 1;

/// ADFM layout (little-endian): "ADFM", u32 version, u32 rows, u32 columns,
/// u16 label per column, f64 values column-major.
void write_feature_file(const std::filesystem::path& path, const FeatureMatrix& matrix);
FeatureMatrix read_feature_file(const std::filesystem::path& path);

/// One row per vector, values then label, with a header row.
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix);

}  // namespace adid

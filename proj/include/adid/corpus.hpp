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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adid/wav.hpp"

namespace adid {

inline constexpr std::size_t kSegmentLength = 4096;

struct Segment {
  std::vector<double> samples;  // exactly kSegmentLength values
  int device_label = 0;
  std::size_t origin_offset = 0;
};

/// Start offsets drawn uniformly with replacement from [0, length - 4096].
std::vector<std::size_t> segment_offsets(std::size_t recording_length, std::size_t count,
                                         std::uint64_t seed);

std::vector<Segment> segment_recording(const Recording& rec, std::size_t count, std::uint64_t seed);

/// Checks the Recording invariants (non-empty, finite, within [-1, 1], label
/// below class_count). Throws on violation.
void validate_recording(const Recording& rec, int class_count);

enum class Role { kTrain, kTest };

std::string_view role_name(Role role);
Role parse_role(std::string_view text);

struct CorpusSpec {
  int device_count = 9;
  std::size_t train_segments_per_recording = 1000;
  std::size_t test_segments_per_recording = 100;
  int recordings_per_device_train = 2;
  int recordings_per_device_test = 1;
  std::uint64_t seed = 1;
  double duration_seconds = 360.0;
  std::uint32_t sample_rate = 16000;

  void validate() const;
  std::size_t train_segment_total() const;
  std::size_t test_segment_total() const;
};

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  int device_label = 0;
  Role role = Role::kTrain;
};

struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  int class_count() const;
  std::filesystem::path resolve(const ManifestEntry& e) const { return root / e.path; }
};

/// Tab-separated `relative_path<TAB>device_label<TAB>role`, one line per file.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Per-recording segment seed. Index 0 of the voter stream is the one used
/// for ordinary train/test matrices, so single-voter runs reproduce them.
std::uint64_t recording_segment_seed(std::uint64_t corpus_seed, std::size_t entry_index,
                                     std::size_t voter = 0);

/// Loads every entry of the given role and cuts its segments.
std::vector<Segment> load_segments(const Manifest& manifest, Role role,
                                   std::size_t per_recording, std::uint64_t corpus_seed);

}  // namespace adid

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

#include "adid/corpus.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "adid/error.hpp"
#include "adid/seed.hpp"

namespace adid {

std::vector<std::size_t> segment_offsets(std::size_t recording_length, std::size_t count,
                                         std::uint64_t seed) {
  if (count == 0) fail(ErrorKind::kConfig, "segment count must be at least 1");
  if (recording_length < kSegmentLength)
    fail(ErrorKind::kTooShort, "recording has " + std::to_string(recording_length) +
                                   " samples, need at least " + std::to_string(kSegmentLength));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, recording_length - kSegmentLength);
  std::vector<std::size_t> offsets(count);
  for (auto& o : offsets) o = pick(rng);
  return offsets;
}

std::vector<Segment> segment_recording(const Recording& rec, std::size_t count, std::uint64_t seed) {
  std::vector<Segment> out;
  out.reserve(count);
  for (std::size_t offset : segment_offsets(rec.samples.size(), count, seed)) {
    Segment seg;
    seg.samples.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                       rec.samples.begin() + static_cast<std::ptrdiff_t>(offset + kSegmentLength));
    seg.device_label = rec.device_label;
    seg.origin_offset = offset;
    out.push_back(std::move(seg));
  }
  return out;
}

void validate_recording(const Recording& rec, int class_count) {
  if (rec.samples.empty()) fail(ErrorKind::kEmptyInput, "recording has no samples");
  if (rec.sample_rate == 0) fail(ErrorKind::kFormat, "sample rate must be positive");
  for (double s : rec.samples)
    if (!std::isfinite(s) || s < -1.0 || s > 1.0)
      fail(ErrorKind::kNumeric, "sample outside [-1, 1] in " + rec.source_name);
  if (rec.device_label < 0 || rec.device_label >= class_count)
    fail(ErrorKind::kConfig, "device label " + std::to_string(rec.device_label) +
                                 " outside [0, " + std::to_string(class_count) + ")");
}

std::string_view role_name(Role role) { return role == Role::kTrain ? "train" : "test"; }

Role parse_role(std::string_view text) {
  if (text == "train") return Role::kTrain;
  if (text == "test") return Role::kTest;
  fail(ErrorKind::kFormat, "unknown role '" + std::string(text) + "'");
}

void CorpusSpec::validate() const {
  if (device_count <= 0) fail(ErrorKind::kConfig, "device_count must be positive");
  if (train_segments_per_recording == 0 || test_segments_per_recording == 0)
    fail(ErrorKind::kConfig, "segments per recording must be positive");
  if (recordings_per_device_train <= 0 || recordings_per_device_test <= 0)
    fail(ErrorKind::kConfig, "recordings per device must be positive");
  if (sample_rate == 0) fail(ErrorKind::kConfig, "sample_rate must be positive");
  if (!(duration_seconds * sample_rate >= static_cast<double>(kSegmentLength)))
    fail(ErrorKind::kConfig, "duration too short to hold one segment");
}

std::size_t CorpusSpec::train_segment_total() const {
  return static_cast<std::size_t>(device_count) * static_cast<std::size_t>(recordings_per_device_train) *
         train_segments_per_recording;
}

std::size_t CorpusSpec::test_segment_total() const {
  return static_cast<std::size_t>(device_count) * static_cast<std::size_t>(recordings_per_device_test) *
         test_segments_per_recording;
}

int Manifest::class_count() const {
  int k = 0;
  for (const auto& e : entries) k = std::max(k, e.device_label + 1);
  return k;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open manifest " + path.string());
  Manifest m;
  m.root = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string file, label, role;
    if (!std::getline(fields, file, '\t') || !std::getline(fields, label, '\t') ||
        !std::getline(fields, role, '\t'))
      fail(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    ManifestEntry e;
    e.path = file;
    try {
      std::size_t used = 0;
      e.device_label = std::stoi(label, &used);
      if (used != label.size() || e.device_label < 0) throw std::invalid_argument(label);
    } catch (const std::exception&) {
      fail(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": bad label '" + label + "'");
    }
    e.role = parse_role(role);
    m.entries.push_back(std::move(e));
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write manifest " + path.string());
  for (const auto& e : entries)
    out << e.path << '\t' << e.device_label << '\t' << role_name(e.role) << '\n';
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

std::uint64_t recording_segment_seed(std::uint64_t corpus_seed, std::size_t entry_index,
                                     std::size_t voter) {
  return derive_seed(corpus_seed, {0x5E6ull, entry_index, voter});
}

std::vector<Segment> load_segments(const Manifest& manifest, Role role,
                                   std::size_t per_recording, std::uint64_t corpus_seed) {
  const int k = manifest.class_count();
  std::vector<Segment> out;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.role != role) continue;
    Recording rec = load_wav(manifest.resolve(e), e.device_label);
    validate_recording(rec, k);
    auto segs = segment_recording(rec, per_recording, recording_segment_seed(corpus_seed, i));
    out.insert(out.end(), std::make_move_iterator(segs.begin()), std::make_move_iterator(segs.end()));
  }
  return out;
}

}  // namespace adid

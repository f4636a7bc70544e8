// Copyright 2026 The cavpref Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cavpref/qa_item.hpp"

namespace cavpref::bench {

// One line of the embedding-annotated source manifest. Media are opaque
// references; no decoding happens anywhere in the pipeline. Embeddings are
// stored as fixed-precision (6 decimal places) arrays.
struct SourceSample {
  std::string id;
  std::string media_ref;
  std::vector<double> visual_embedding;
  std::vector<double> audio_embedding;
  std::vector<double> label_embedding;
  std::string class_label;
  std::string supercategory;
  std::string question_category;
  std::optional<std::pair<std::string, std::string>> source_qa;  // (question, answer)
  bool both_modalities_essential = false;
  std::optional<std::string> subject;
  std::optional<std::string> attribute;
};

std::vector<SourceSample> read_source_manifest(const std::string& path);
void write_source_manifest(const std::string& path, std::span<const SourceSample> samples);

// Visual/audio source of one temporal segment of a composite clip. An empty
// source id is a tombstone (the modality was deleted).
struct MediaSegment {
  std::string visual_source;
  std::string audio_source;

  bool operator==(const MediaSegment&) const = default;
};

// Exchanges the audio sources of a two-segment composite. Applying it twice
// restores the identity stitch.
std::vector<MediaSegment> swap_audio(std::vector<MediaSegment> segments);

// Enough information to rebuild the item deterministically from the source
// manifest and seed.
struct Provenance {
  std::vector<std::string> source_ids;
  std::string transformer;
  std::map<std::string, std::string> substituted;
  std::vector<MediaSegment> segments;  // composite tasks only
  eval::Setting setting = eval::Setting::kBase;
};

struct BuiltItem {
  eval::QAItem item;
  Provenance provenance;
};

std::vector<BuiltItem> read_built_items(const std::string& path);
void write_built_items(const std::string& path, std::span<const BuiltItem> items);

}  // namespace cavpref::bench

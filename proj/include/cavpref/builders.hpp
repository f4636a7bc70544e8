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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cavpref/lookup_tables.hpp"
#include "cavpref/manifest.hpp"
#include "cavpref/rng.hpp"

namespace cavpref::bench {

// A builder either yields an item or a machine-readable skip reason; skipped
// samples are never silently dropped.
struct BuilderResult {
  std::optional<BuiltItem> item;
  std::string skip_reason;

  static BuilderResult skip(std::string reason) {
    BuilderResult r;
    r.skip_reason = std::move(reason);
    return r;
  }
  static BuilderResult built(BuiltItem b) {
    BuilderResult r;
    r.item = std::move(b);
    return r;
  }
};

// All builders emit canonical base-setting items; render_setting produces
// the instruction variant. Option order is a seeded shuffle.

// Removes the ground-truth answer and substitutes a same-supercategory
// distractor from t2; the remaining options come from the t3 pool of the
// question category. The answer never appears among the choices.
BuilderResult build_mcit(const SourceSample& sample, const LookupTables& tables, Rng& rng);

// Options drawn entirely from the t1-unrelated pool of the sample's class;
// nothing presented relates to the question.
BuilderResult build_icit(const SourceSample& sample, const LookupTables& tables, Rng& rng);

// Replaces one modality with an unrelated donor clip from the manifest.
// Donors sharing the host's t2 bucket are rejected.
BuilderResult build_mvit(const SourceSample& sample, const LookupTables& tables,
                         std::span<const SourceSample> manifest, Rng& rng);
BuilderResult build_mait(const SourceSample& sample, const LookupTables& tables,
                         std::span<const SourceSample> manifest, Rng& rng);

// Two clips concatenated in time; asks for the event order. The correct
// option states the actual order; distractors are the reversed order, the
// simultaneity claim, and one unrelated pair.
BuilderResult build_cot_stitch(const SourceSample& a, const SourceSample& b,
                               const LookupTables& tables, Rng& rng);

// Same option templates, but the audio sources of the two segments are
// exchanged, so no presented ordering is consistent with the clip.
BuilderResult build_cot_swap(const SourceSample& a, const SourceSample& b,
                             const LookupTables& tables, Rng& rng);

// Attribute binding over two events: the prime distractor exchanges the two
// attributes, keeping exactly the same words.
BuilderResult build_cat(const SourceSample& a, const SourceSample& b,
                        const LookupTables& tables, Rng& rng);

// Deletes one modality (tombstoned provenance); options are the original
// answer plus t3 entries. Only dual-modality-essential samples qualify.
BuilderResult build_mvt(const SourceSample& sample, const LookupTables& tables, Rng& rng);
BuilderResult build_mat(const SourceSample& sample, const LookupTables& tables, Rng& rng);

// Cross-modal alignment gate: the product of the visual<->label and
// label<->audio similarities (each cosine mapped to [0,1]) must reach 0.70.
struct AlignmentDecision {
  bool accept = false;
  double score = 0.0;
  std::string reason;
};

AlignmentDecision alignment_filter(const SourceSample& sample);

inline constexpr double kAlignmentThreshold = 0.70;

// Base -> instruction rendering: appends the withholding instruction to the
// question and "None of the above" as the final choice (which becomes the
// key when the item had none). Idempotent; base is the identity.
eval::QAItem render_setting(const eval::QAItem& item, eval::Setting setting);

struct BuildReport {
  std::map<std::string, int> counts;  // per task
  std::map<std::string, int> skips;   // "task:reason" histogram
};

struct BuildOptions {
  std::uint64_t seed = 1;
  std::vector<TaskKind> tasks{kAllTaskKinds.begin(), kAllTaskKinds.end()};
  eval::Setting setting = eval::Setting::kBase;
};

// Runs the selected transformers over the manifest. Output order follows
// manifest order; every item's RNG stream is derived from (seed, task,
// sample id), so results do not depend on which tasks run together. The
// alignment filter gates the compositional tasks, matching where the
// embedding-annotated corpus needs quality control.
std::map<TaskKind, std::vector<BuiltItem>> build_all(std::span<const SourceSample> samples,
                                                     const LookupTables& tables,
                                                     const BuildOptions& options,
                                                     BuildReport& report);

std::string format_build_report(const BuildReport& report);
void write_build_report(const std::string& path, const BuildReport& report);

}  // namespace cavpref::bench

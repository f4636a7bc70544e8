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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavpref/task_kind.hpp"

namespace cavpref::eval {

enum class Setting { kBase, kInstruction };

std::string to_string(Setting s);
Setting setting_from_string(std::string_view name);

inline constexpr const char* kNoneOfTheAboveText = "None of the above";
inline constexpr const char* kInstructionSentence =
    "If the correct answer is not present respond with None of the above.";

struct Choice {
  char label = 'A';
  std::string text;
};

// One multiple-choice question. correct_label is absent when the keyed
// answer is a refusal variant (base setting of the adversarial and
// missing-modality tasks). Labels run consecutively from 'A'; in the
// instruction setting the final choice text is exactly "None of the above".
// Media references are opaque; an empty string means the modality is absent
// or tombstoned.
struct QAItem {
  std::string id;
  std::string question;
  std::vector<Choice> choices;
  std::optional<char> correct_label;
  std::string category;
  TaskKind task_kind = TaskKind::kMcit;
  Setting setting = Setting::kBase;
  std::string visual_ref;
  std::string audio_ref;

  void validate() const;
  std::string rendered_choices() const;  // "A. text\nB. text\n..."
};

// Canonical classes of refusal-style answers; free-form variants are folded
// into these before comparison.
enum class RefusalKind {
  kNoneOfTheAbove,
  kIrrelevantOptions,
  kMismatched,
  kVideoMissing,
  kAudioMissing,
  kCannotAnswer,
};

// Detects a refusal variant anywhere in the response (case-insensitive,
// punctuation-tolerant).
std::optional<RefusalKind> detect_refusal(std::string_view response);

// Whether a refusal class is an accepted correct answer for a task kind.
bool refusal_accepted(TaskKind kind, RefusalKind refusal);

// A canonical refusal string appropriate for the task (what an ideal
// responder would say on a keyless item).
std::string canonical_refusal(TaskKind kind);

}  // namespace cavpref::eval

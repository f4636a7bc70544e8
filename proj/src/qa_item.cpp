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

#include "cavpref/qa_item.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "cavpref/error.hpp"

namespace cavpref::eval {

std::string to_string(Setting s) {
  return s == Setting::kBase ? "base" : "instruction";
}

Setting setting_from_string(std::string_view name) {
  if (name == "base") return Setting::kBase;
  if (name == "instruction") return Setting::kInstruction;
  throw ValidationError("unknown setting '" + std::string(name) + "'");
}

void QAItem::validate() const {
  if (choices.size() < 2 || choices.size() > 5) {
    throw ValidationError("item '" + id + "': choice count " +
                          std::to_string(choices.size()) + " outside [2, 5]");
  }
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (choices[i].label != static_cast<char>('A' + i)) {
      throw ValidationError("item '" + id + "': labels must be consecutive from A");
    }
  }
  if (correct_label) {
    const char last = static_cast<char>('A' + choices.size() - 1);
    if (*correct_label < 'A' || *correct_label > last) {
      throw ValidationError("item '" + id + "': correct label out of range");
    }
  }
  if (setting == Setting::kInstruction &&
      choices.back().text != kNoneOfTheAboveText) {
    throw ValidationError("item '" + id +
                          "': instruction setting requires the final choice to be '" +
                          std::string(kNoneOfTheAboveText) + "'");
  }
}

std::string QAItem::rendered_choices() const {
  std::string out;
  for (const auto& c : choices) {
    out += c.label;
    out += ". ";
    out += c.text;
    out += '\n';
  }
  return out;
}

namespace {

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool space = false;
  for (char c : s) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += static_cast<char>(std::tolower(u));
    } else {
      space = true;
    }
  }
  return out;
}

bool contains_phrase(const std::string& normalized, const char* phrase) {
  const std::string needle = normalize(phrase);
  auto pos = normalized.find(needle);
  while (pos != std::string::npos) {
    const bool left_ok = pos == 0 || normalized[pos - 1] == ' ';
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == normalized.size() || normalized[end] == ' ';
    if (left_ok && right_ok) return true;
    pos = normalized.find(needle, pos + 1);
  }
  return false;
}

struct VariantRow {
  const char* phrase;
  RefusalKind kind;
};

// Variant table. Order matters only in that more specific phrases appear
// before generic ones.
constexpr std::array<VariantRow, 22> kVariants = {{
    {"none of the above", RefusalKind::kNoneOfTheAbove},
    {"none of the given options", RefusalKind::kNoneOfTheAbove},
    {"none of these", RefusalKind::kNoneOfTheAbove},
    {"the choices are irrelevant", RefusalKind::kIrrelevantOptions},
    {"choices are irrelevant", RefusalKind::kIrrelevantOptions},
    {"irrelevant options", RefusalKind::kIrrelevantOptions},
    {"provided options are incorrect", RefusalKind::kIrrelevantOptions},
    {"no option is correct", RefusalKind::kIrrelevantOptions},
    {"the video and question are mismatched", RefusalKind::kMismatched},
    {"the audio and question are mismatched", RefusalKind::kMismatched},
    {"the audio and video are mismatched", RefusalKind::kMismatched},
    {"the visual is incompatible with the question", RefusalKind::kMismatched},
    {"the audio is incompatible with the question", RefusalKind::kMismatched},
    {"the visual is incompatible", RefusalKind::kMismatched},
    {"the audio is incompatible", RefusalKind::kMismatched},
    {"the video is missing", RefusalKind::kVideoMissing},
    {"there is no video", RefusalKind::kVideoMissing},
    {"the audio is missing", RefusalKind::kAudioMissing},
    {"there is no audio", RefusalKind::kAudioMissing},
    {"i cannot answer", RefusalKind::kCannotAnswer},
    {"i can t answer", RefusalKind::kCannotAnswer},
    {"cannot answer", RefusalKind::kCannotAnswer},
}};

}  // namespace

std::optional<RefusalKind> detect_refusal(std::string_view response) {
  const std::string norm = normalize(response);
  if (norm.empty()) return std::nullopt;
  for (const auto& row : kVariants) {
    if (contains_phrase(norm, row.phrase)) return row.kind;
  }
  return std::nullopt;
}

bool refusal_accepted(TaskKind kind, RefusalKind refusal) {
  if (refusal == RefusalKind::kCannotAnswer || refusal == RefusalKind::kNoneOfTheAbove) {
    return true;
  }
  switch (kind) {
    case TaskKind::kMcit:
    case TaskKind::kIcit:
      return refusal == RefusalKind::kIrrelevantOptions;
    case TaskKind::kMvit:
    case TaskKind::kMait:
    case TaskKind::kCotSwap:
      return refusal == RefusalKind::kMismatched;
    case TaskKind::kMvt:
      return refusal == RefusalKind::kVideoMissing;
    case TaskKind::kMat:
      return refusal == RefusalKind::kAudioMissing;
    case TaskKind::kCotStitch:
    case TaskKind::kCat:
      return false;
  }
  return false;
}

std::string canonical_refusal(TaskKind kind) {
  switch (kind) {
    case TaskKind::kMvit:
    case TaskKind::kCotSwap:
      return "The video and question are mismatched.";
    case TaskKind::kMait:
      return "The audio and question are mismatched.";
    case TaskKind::kMvt:
      return "The video is missing.";
    case TaskKind::kMat:
      return "The audio is missing.";
    default:
      return std::string(kNoneOfTheAboveText) + ".";
  }
}

}  // namespace cavpref::eval

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
#include <vector>

#include "cavpref/task_kind.hpp"

namespace cavpref {

// Policy-over-reference log ratios for the winning and losing response of
// one preference pair.
struct LogRatioPair {
  double win_logratio = 0.0;
  double lose_logratio = 0.0;
};

// One training sample. The losing conditioning vectors exist exactly for the
// task kinds whose anchor switch is on: visual_lose iff switch_eta == 1,
// audio_lose iff switch_gamma == 1. For the missing-modality kinds (MVT/MAT)
// the losing vector is all zeros, modelling deletion rather than
// substitution.
struct PreferenceRecord {
  std::string id;
  std::vector<int> question;
  std::vector<int> win_response;
  std::vector<int> lose_response;
  std::vector<double> visual_win;
  std::optional<std::vector<double>> visual_lose;
  std::vector<double> audio_win;
  std::optional<std::vector<double>> audio_lose;
  TaskKind task_kind = TaskKind::kMcit;
  std::string category;

  // Checks the conditioning/TaskKind invariants; throws ValidationError
  // naming the record id and the violated field.
  void validate(std::size_t feature_dim) const;
};

void validate_batch(const std::vector<PreferenceRecord>& batch, std::size_t feature_dim);

// Line-oriented JSON serialization (one record per line).
std::vector<PreferenceRecord> read_preference_records(const std::string& path);
void write_preference_records(const std::string& path,
                              const std::vector<PreferenceRecord>& records);

}  // namespace cavpref

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

#include <array>
#include <string>
#include <string_view>

namespace cavpref {

// The nine benchmark task kinds.
//
//   MCIT        missing-choice identification
//   ICIT        inconsistent-choice identification
//   MVIT/MAIT   mismatched video / audio identification
//   COT_STITCH  event-order question over two stitched clips
//   COT_SWAP    audio order swapped against the video order
//   CAT         attribute binding between two events
//   MVT/MAT     missing video / audio detection
enum class TaskKind {
  kMcit,
  kIcit,
  kMvit,
  kMait,
  kCotStitch,
  kCotSwap,
  kCat,
  kMvt,
  kMat,
};

inline constexpr std::array<TaskKind, 9> kAllTaskKinds = {
    TaskKind::kMcit,      TaskKind::kIcit,    TaskKind::kMvit,
    TaskKind::kMait,      TaskKind::kCotStitch, TaskKind::kCotSwap,
    TaskKind::kCat,       TaskKind::kMvt,     TaskKind::kMat,
};

// Visual-anchor switch: on exactly for the tasks whose corruption lives in
// the visual stream.
inline int switch_eta(TaskKind k) {
  return (k == TaskKind::kMvit || k == TaskKind::kMvt || k == TaskKind::kCotSwap) ? 1 : 0;
}

// Audio-anchor switch.
inline int switch_gamma(TaskKind k) {
  return (k == TaskKind::kMait || k == TaskKind::kMat) ? 1 : 0;
}

std::string to_string(TaskKind k);
TaskKind task_kind_from_string(std::string_view name);

}  // namespace cavpref

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

#include "cavpref/task_kind.hpp"

#include "cavpref/error.hpp"

namespace cavpref {

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::kMcit: return "MCIT";
    case TaskKind::kIcit: return "ICIT";
    case TaskKind::kMvit: return "MVIT";
    case TaskKind::kMait: return "MAIT";
    case TaskKind::kCotStitch: return "COT-Stitch";
    case TaskKind::kCotSwap: return "COT-Swap";
    case TaskKind::kCat: return "CAT";
    case TaskKind::kMvt: return "MVT";
    case TaskKind::kMat: return "MAT";
  }
  throw ValidationError("unknown TaskKind");
}

TaskKind task_kind_from_string(std::string_view name) {
  for (TaskKind k : kAllTaskKinds) {
    if (to_string(k) == name) return k;
  }
  // Accept the underscore spelling used in file names.
  if (name == "COT_STITCH" || name == "COT_Stitch") return TaskKind::kCotStitch;
  if (name == "COT_SWAP" || name == "COT_Swap") return TaskKind::kCotSwap;
  throw ValidationError("unknown task kind '" + std::string(name) + "'");
}

}  // namespace cavpref

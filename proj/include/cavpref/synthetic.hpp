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
#include <vector>

#include "cavpref/policy_model.hpp"
#include "cavpref/preference.hpp"

namespace cavpref::policy {

// Random records cycling through all nine task kinds, with dense random
// conditioning. Used by the gradient checks.
std::vector<PreferenceRecord> make_mixed_batch(int n, const PolicyDims& dims,
                                               std::uint64_t seed);

// Linearly separable preference set: each sample carries a concept, both
// conditioning vectors point along the concept axis (plus noise), the
// winning response is the concept token and the losing response a different
// concept's token. A single linear layer can drive every margin positive.
std::vector<PreferenceRecord> make_separable_dataset(int n, const PolicyDims& dims,
                                                     std::uint64_t seed);

// Two-category tug-of-war: every sample shares the same conditioning
// direction, the majority category prefers one token order and the minority
// the reverse, so mean-risk training settles on the majority. skew is the
// minority fraction. Categories are "head" and "tail".
std::vector<PreferenceRecord> make_tail_dataset(int n, double skew,
                                                const PolicyDims& dims,
                                                std::uint64_t seed);

}  // namespace cavpref::policy

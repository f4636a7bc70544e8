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

#include <memory>
#include <span>
#include <vector>

#include "cavpref/preference.hpp"
#include "cavpref/similarity.hpp"

namespace cavpref {

// Automatic per-sample selection of the preference temperature.
//
// For each sample the raw gap dS = score_win - score_lose is min-max
// normalized over the batch to [0, 1] and passed through
// g(x) = slope * x + intercept, so that with the default 0.9/0.1 the output
// always lands in [0.1, 1.0] and is non-decreasing in the raw gap. A batch
// whose gaps are all equal normalizes to the midpoint 0.5, i.e. g(0.5).
//
// text_similarity scores the response channel; av_similarity scores the
// cross-modal anchor channels. response_embedder turns token sequences into
// vectors the text provider can consume; the pairing of (reference,
// candidate) per channel is fixed in compute_batch_betas.
struct BetaCalibrator {
  double slope = 0.9;
  double intercept = 0.1;
  std::shared_ptr<const SimilarityProvider> text_similarity;
  std::shared_ptr<const SimilarityProvider> av_similarity;
  std::shared_ptr<const TokenEmbedder> response_embedder;

  void validate() const;
};

// Maps batch score pairs to per-sample beta values. Inputs must have equal
// nonzero length and finite entries.
std::vector<double> calibrate_beta(std::span<const double> batch_scores_win,
                                   std::span<const double> batch_scores_lose,
                                   const BetaCalibrator& cal);

// Per-record betas for one batch. The anchor channels are normalized over
// the sub-batch that actually carries the channel; v/a are aligned with
// eta_indices/gamma_indices.
struct BatchBetas {
  std::vector<double> y;
  std::vector<std::size_t> eta_indices;
  std::vector<double> v;
  std::vector<std::size_t> gamma_indices;
  std::vector<double> a;
};

BatchBetas compute_batch_betas(std::span<const PreferenceRecord> batch,
                               const BetaCalibrator& cal);

}  // namespace cavpref

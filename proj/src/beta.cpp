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

#include "cavpref/beta.hpp"

#include <algorithm>

#include "cavpref/error.hpp"
#include "cavpref/math_util.hpp"

namespace cavpref {

void BetaCalibrator::validate() const {
  if (!(slope >= 0.0) || !(intercept > 0.0) || !(slope + intercept <= 1.0)) {
    throw ValidationError("BetaCalibrator: g must map [0,1] into (0, 1]; got slope=" +
                          std::to_string(slope) + ", intercept=" + std::to_string(intercept));
  }
}

std::vector<double> calibrate_beta(std::span<const double> batch_scores_win,
                                   std::span<const double> batch_scores_lose,
                                   const BetaCalibrator& cal) {
  cal.validate();
  if (batch_scores_win.size() != batch_scores_lose.size()) {
    throw ValidationError("calibrate_beta: score vectors differ in length (" +
                          std::to_string(batch_scores_win.size()) + " vs " +
                          std::to_string(batch_scores_lose.size()) + ")");
  }
  if (batch_scores_win.empty()) {
    throw ValidationError("calibrate_beta: empty batch");
  }
  check_finite(batch_scores_win, "batch_scores_win");
  check_finite(batch_scores_lose, "batch_scores_lose");

  const std::size_t n = batch_scores_win.size();
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) gaps[i] = batch_scores_win[i] - batch_scores_lose[i];

  const auto [lo_it, hi_it] = std::minmax_element(gaps.begin(), gaps.end());
  const double lo = *lo_it, hi = *hi_it;

  std::vector<double> betas(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Degenerate batch: every gap equal, use the midpoint.
    const double normalized = (hi > lo) ? (gaps[i] - lo) / (hi - lo) : 0.5;
    betas[i] = cal.slope * normalized + cal.intercept;
  }
  return betas;
}

namespace {

// Raw (win, lose) scores for one channel over a sub-batch; missing provider
// means every score is 0, which calibrates to the degenerate midpoint.
struct ChannelScores {
  std::vector<double> win;
  std::vector<double> lose;
};

std::vector<double> run_channel(const ChannelScores& s, const BetaCalibrator& cal) {
  if (s.win.empty()) return {};
  return calibrate_beta(s.win, s.lose, cal);
}

}  // namespace

BatchBetas compute_batch_betas(std::span<const PreferenceRecord> batch,
                               const BetaCalibrator& cal) {
  cal.validate();
  BatchBetas out;

  ChannelScores y, v, a;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PreferenceRecord& rec = batch[i];

    // Response channel: each response scored against the winning audio,
    // mirroring a cross-modal text score.
    if (cal.text_similarity && cal.response_embedder) {
      const auto win_emb = cal.response_embedder->embed(rec.win_response);
      const auto lose_emb = cal.response_embedder->embed(rec.lose_response);
      y.win.push_back(cal.text_similarity->score(rec.audio_win, win_emb));
      y.lose.push_back(cal.text_similarity->score(rec.audio_win, lose_emb));
    } else {
      y.win.push_back(0.0);
      y.lose.push_back(0.0);
    }

    if (rec.visual_lose) {
      out.eta_indices.push_back(i);
      if (cal.av_similarity) {
        v.win.push_back(cal.av_similarity->score(rec.audio_win, rec.visual_win));
        v.lose.push_back(cal.av_similarity->score(rec.audio_win, *rec.visual_lose));
      } else {
        v.win.push_back(0.0);
        v.lose.push_back(0.0);
      }
    }
    if (rec.audio_lose) {
      out.gamma_indices.push_back(i);
      if (cal.av_similarity) {
        a.win.push_back(cal.av_similarity->score(rec.visual_win, rec.audio_win));
        a.lose.push_back(cal.av_similarity->score(rec.visual_win, *rec.audio_lose));
      } else {
        a.win.push_back(0.0);
        a.lose.push_back(0.0);
      }
    }
  }

  out.y = run_channel(y, cal);
  out.v = run_channel(v, cal);
  out.a = run_channel(a, cal);
  return out;
}

}  // namespace cavpref

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

#include "cavpref/objective.hpp"

#include <cmath>

#include "cavpref/error.hpp"
#include "cavpref/math_util.hpp"

namespace cavpref {

namespace {

void check_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.1 || beta > 1.0) {
    throw ValidationError("beta must lie in [0.1, 1.0], got " + std::to_string(beta));
  }
}

void check_logratio(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string("non-finite value in field '") + field + "'");
  }
}

// Tilted aggregate of log-sigmoid per-sample losses, per the configured
// direction. Both directions yield a non-negative component value.
double aggregate_component(const std::vector<double>& log_sigmoid_losses, double lambda,
                           Tilt tilt) {
  if (log_sigmoid_losses.empty()) return 0.0;
  if (tilt == Tilt::kPseudocode) {
    return robust_aggregate(log_sigmoid_losses, lambda, Tilt::kPseudocode);
  }
  std::vector<double> positive(log_sigmoid_losses.size());
  for (std::size_t i = 0; i < positive.size(); ++i) positive[i] = -log_sigmoid_losses[i];
  return robust_aggregate(positive, lambda, Tilt::kTheorem);
}

}  // namespace

double pair_preference_loss(const LogRatioPair& lr, double beta) {
  check_logratio(lr.win_logratio, "win_logratio");
  check_logratio(lr.lose_logratio, "lose_logratio");
  check_beta(beta);
  return log_sigmoid(beta * (lr.win_logratio - lr.lose_logratio));
}

double dpo_identity(const LogRatioPair& lr, double beta) {
  check_logratio(lr.win_logratio, "win_logratio");
  check_logratio(lr.lose_logratio, "lose_logratio");
  check_beta(beta);
  // (f_l/f_w)^beta = exp(beta * (lose_logratio - win_logratio)); never
  // exponentiated outside the softplus.
  return softplus(beta * (lr.lose_logratio - lr.win_logratio));
}

double visual_anchor_loss(const PolicyPair& pair, const PreferenceRecord& rec,
                          double beta_v) {
  check_beta(beta_v);
  if (!rec.visual_lose) {
    throw ValidationError("record '" + rec.id + "' (" + to_string(rec.task_kind) +
                          "): visual anchor requires visual_lose");
  }
  const double win = pair.logratio(rec.win_response, rec.visual_win, rec.audio_win, rec.question);
  const double lose =
      pair.logratio(rec.win_response, *rec.visual_lose, rec.audio_win, rec.question);
  return log_sigmoid(beta_v * (win - lose));
}

double audio_anchor_loss(const PolicyPair& pair, const PreferenceRecord& rec,
                         double beta_a) {
  check_beta(beta_a);
  if (!rec.audio_lose) {
    throw ValidationError("record '" + rec.id + "' (" + to_string(rec.task_kind) +
                          "): audio anchor requires audio_lose");
  }
  const double win = pair.logratio(rec.win_response, rec.visual_win, rec.audio_win, rec.question);
  const double lose =
      pair.logratio(rec.win_response, rec.visual_win, *rec.audio_lose, rec.question);
  return log_sigmoid(beta_a * (win - lose));
}

ObjectiveResult cavpref_objective(const PolicyPair& pair,
                                  std::span<const PreferenceRecord> batch,
                                  const BetaCalibrator& cal, const RobustConfig& cfg) {
  cfg.validate();
  if (batch.empty()) throw ValidationError("cavpref_objective: empty batch");
  const std::size_t feature_dim = batch[0].visual_win.size();
  for (const auto& rec : batch) rec.validate(feature_dim);

  ObjectiveResult res;
  res.betas = compute_batch_betas(batch, cal);

  std::size_t vi = 0, ai = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PreferenceRecord& rec = batch[i];

    const double lr_win =
        pair.logratio(rec.win_response, rec.visual_win, rec.audio_win, rec.question);
    const double lr_lose =
        pair.logratio(rec.lose_response, rec.visual_win, rec.audio_win, rec.question);
    const double beta_y = res.betas.y[i];
    res.sample_loss_y.push_back(
        pair_preference_loss({lr_win, lr_lose}, beta_y));
    res.margin_y.push_back(beta_y * (lr_win - lr_lose));

    if (switch_eta(rec.task_kind) == 1) {
      const double beta_v = res.betas.v[vi++];
      const double lr_anchor_lose =
          pair.logratio(rec.win_response, *rec.visual_lose, rec.audio_win, rec.question);
      res.sample_loss_v.push_back(log_sigmoid(beta_v * (lr_win - lr_anchor_lose)));
      res.margin_v.push_back(beta_v * (lr_win - lr_anchor_lose));
    }
    if (switch_gamma(rec.task_kind) == 1) {
      const double beta_a = res.betas.a[ai++];
      const double lr_anchor_lose =
          pair.logratio(rec.win_response, rec.visual_win, *rec.audio_lose, rec.question);
      res.sample_loss_a.push_back(log_sigmoid(beta_a * (lr_win - lr_anchor_lose)));
      res.margin_a.push_back(beta_a * (lr_win - lr_anchor_lose));
    }
  }

  res.components.y = aggregate_component(res.sample_loss_y, cfg.lambda_y, cfg.tilt);
  res.components.v = aggregate_component(res.sample_loss_v, cfg.lambda_v, cfg.tilt);
  res.components.a = aggregate_component(res.sample_loss_a, cfg.lambda_a, cfg.tilt);
  res.total = res.components.y + res.components.v + res.components.a;
  return res;
}

}  // namespace cavpref

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

#include <span>
#include <vector>

#include "cavpref/beta.hpp"
#include "cavpref/preference.hpp"
#include "cavpref/robust.hpp"

namespace cavpref {

// Abstract (policy, frozen reference) pair. Returns
// log pi_theta(response | visual, audio, question) - log pi_ref(...).
// The concrete toy implementation lives in policy_model.hpp; the objective
// below only needs this one number per conditioning.
class PolicyPair {
 public:
  virtual ~PolicyPair() = default;
  virtual double logratio(std::span<const int> response,
                          std::span<const double> visual,
                          std::span<const double> audio,
                          std::span<const int> question) const = 0;
};

// log sigma(beta * (win_logratio - lose_logratio)). Always negative;
// log(1/2) at a zero gap. beta must lie in [0.1, 1.0].
double pair_preference_loss(const LogRatioPair& lr, double beta);

// The same quantity through the algebraic identity
// log(1 + (f_l/f_w)^beta), evaluated in log space. Verification oracle:
// pair_preference_loss(lr, beta) + dpo_identity(lr, beta) == 0.
double dpo_identity(const LogRatioPair& lr, double beta);

// Anchor losses: reward difference of the winning response under correct
// versus corrupted conditioning in one modality, the other held fixed.
// The visual anchor swaps visual_lose in for the losing branch; the audio
// anchor swaps audio_lose. Requires the corresponding losing vector.
double visual_anchor_loss(const PolicyPair& pair, const PreferenceRecord& rec,
                          double beta_v);
double audio_anchor_loss(const PolicyPair& pair, const PreferenceRecord& rec,
                         double beta_a);

struct ObjectiveComponents {
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
};

// Per-sample diagnostics alongside the aggregated loss. Anchor vectors are
// aligned with betas.eta_indices / betas.gamma_indices.
struct ObjectiveResult {
  double total = 0.0;
  ObjectiveComponents components;
  BatchBetas betas;
  std::vector<double> sample_loss_y;  // log-sigmoid values, <= 0
  std::vector<double> sample_loss_v;
  std::vector<double> sample_loss_a;
  std::vector<double> margin_y;  // beta * logratio gap, per record
  std::vector<double> margin_v;
  std::vector<double> margin_a;
};

// The combined task-switched objective: the response component aggregates
// over the whole batch; the visual component only over records whose visual
// switch is on, the audio component analogously. An empty sub-batch
// contributes exactly 0. Every component is the KL-tilted aggregate of its
// per-sample log-sigmoid losses under cfg.tilt, so the total is a
// non-negative quantity to be minimized.
ObjectiveResult cavpref_objective(const PolicyPair& pair,
                                  std::span<const PreferenceRecord> batch,
                                  const BetaCalibrator& cal, const RobustConfig& cfg);

}  // namespace cavpref

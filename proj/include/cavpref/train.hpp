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
#include <map>
#include <string>
#include <vector>

#include "cavpref/policy_model.hpp"

namespace cavpref::policy {

// Moment-based adaptive optimizer state with bias correction.
struct AdamParams {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Matrix m;
  Matrix v;
  std::int64_t t = 0;
};

struct TrainState {
  ModelPair pair;
  std::int64_t step = 0;
  AdamState opt;
  std::uint64_t rng_seed = 0;

  TrainState(ModelPair p, std::uint64_t seed);
};

// Analytic gradient of cavpref_objective with respect to the policy weights;
// the frozen reference terms are constants. Betas come from the calibrator
// and are likewise treated as constants.
Matrix cavpref_gradient(const TrainState& state,
                        const std::vector<PreferenceRecord>& batch,
                        const BetaCalibrator& cal, const RobustConfig& cfg);

struct MetricsRow {
  std::int64_t step = 0;
  double loss_total = 0.0;
  double loss_y = 0.0;
  double loss_v = 0.0;
  double loss_a = 0.0;
  std::map<std::string, double> category_loss;  // mean -log sigma per category
  std::vector<double> margins_y;                // implicit reward margins
};

struct TrainOptions {
  int epochs = 1;
  double lr = 1e-2;
  int batch_size = 16;
  double divergence_guard = 1e6;
};

struct TrainResult {
  std::vector<MetricsRow> trace;
};

// Deterministic given state.rng_seed: epoch shuffles and batch order are
// driven by the pinned RNG only. Aborts with TrainingDiverged when the loss
// exceeds the guard.
TrainResult train(TrainState& state, const std::vector<PreferenceRecord>& dataset,
                  const TrainOptions& opts, const BetaCalibrator& cal,
                  const RobustConfig& cfg);

void write_metrics_trace(const std::string& path, const std::vector<MetricsRow>& trace);

// Central-difference gradient check. All coordinates are checked up to 200
// parameters; above that a seeded random subset of 200. The relative error
// denominator is floored at 1e-3 so structurally-zero coordinates compare
// absolutely. gradient_override substitutes the analytic gradient (used to
// verify the checker detects planted faults).
struct FdReport {
  bool pass = false;
  bool vacuous = false;
  double max_rel_err = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  std::size_t coords_checked = 0;
  std::string note;
};

FdReport finite_diff_check(TrainState& state, const std::vector<PreferenceRecord>& batch,
                           const BetaCalibrator& cal, const RobustConfig& cfg, double h,
                           double tolerance, const Matrix* gradient_override = nullptr);

}  // namespace cavpref::policy

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
#include <span>
#include <string>
#include <vector>

#include "cavpref/train.hpp"

namespace cavpref::policy {

struct TailArm {
  double worst_category_loss = 0.0;
  double mean_loss = 0.0;
  std::map<std::string, double> category_loss;
};

struct TailRow {
  double lambda = 0.0;
  TailArm robust;    // theorem tilt at this lambda
  TailArm baseline;  // mean-risk arm (lambda = 1e6)
};

struct TailReport {
  double skew = 0.0;
  std::uint64_t seed = 0;
  std::vector<TailRow> rows;
};

struct TailOptions {
  PolicyDims dims{4, 4, 16};
  int train_size = 200;
  int heldout_size = 200;
  int epochs = 40;
  int batch_size = 16;
  double lr = 0.05;
};

// Trains the theorem-tilt arm against the mean-risk baseline on the skewed
// two-category set (same data, same seed, same initialization) and reports
// held-out per-category losses. The held-out loss is -log sigma of the raw
// log-ratio gap (beta = 1), identical for both arms by construction.
TailReport tail_experiment(double skew, std::span<const double> lambda_grid,
                           std::uint64_t seed, const TailOptions& opts = {});

void write_tail_report(const std::string& path, const TailReport& report);
std::string format_tail_report(const TailReport& report);

}  // namespace cavpref::policy

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

#include <string>
#include <vector>

#include "cavpref/config.hpp"

namespace cavpref::cli {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double worst_error = 0.0;
  std::string detail;
};

struct VerifyLedger {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Deliberate fault injection for testing that the battery actually detects
// and names failures.
enum class VerifyFault { kNone, kTiltMismatch, kGradientCorruption };

// The self-contained oracle battery: the preference-loss identity sweep, the
// brute-force DRO equivalence, the constant-batch and large-lambda limits of
// the aggregation, the tilt ordering, the gradient check, and the beta
// calibration bounds.
VerifyLedger run_verification(const RunConfig& config, VerifyFault fault = VerifyFault::kNone);

std::string format_ledger(const VerifyLedger& ledger);

}  // namespace cavpref::cli

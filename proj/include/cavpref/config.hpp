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
#include <string>

#include "cavpref/beta.hpp"
#include "cavpref/policy_model.hpp"
#include "cavpref/robust.hpp"
#include "cavpref/train.hpp"

namespace cavpref::cli {

// Everything a run needs, loadable from one JSON file. Unknown keys are
// rejected so a typo cannot silently fall back to a default. Secrets
// (extractor/responder tokens) never live here; they come from the
// environment.
struct RunConfig {
  std::uint64_t seed = 1;
  Tilt tilt = Tilt::kTheorem;
  double lambda_y = 1.0;
  double lambda_v = 1.0;
  double lambda_a = 0.8;

  double beta_slope = 0.9;
  double beta_intercept = 0.1;

  policy::PolicyDims policy_dims{8, 6, 32};
  std::uint64_t embed_seed = 7;

  policy::TrainOptions train;
  int parallelism = 1;

  std::string extractor_kind = "lexical";  // lexical | constant:<X> | http
  std::string responder_kind = "oracle";   // oracle | constant:<reply> | http

  std::string manifest_path;
  std::string tables_path;
  std::string out_dir = ".";

  void validate() const;
  RobustConfig robust_config() const;
  BetaCalibrator calibrator() const;
};

RunConfig parse_run_config(const std::string& path);
RunConfig run_config_from_json(const std::string& text);
std::string serialize_run_config(const RunConfig& config);

}  // namespace cavpref::cli

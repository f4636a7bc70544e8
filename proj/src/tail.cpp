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

#include "cavpref/tail.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"
#include "cavpref/synthetic.hpp"

namespace cavpref::policy {

namespace {

constexpr double kMeanRiskLambda = 1e6;

TailArm evaluate_heldout(const ModelPair& pair,
                         const std::vector<PreferenceRecord>& heldout) {
  std::map<std::string, std::pair<double, int>> acc;
  double total = 0.0;
  for (const auto& rec : heldout) {
    const double gap =
        pair.logratio(rec.win_response, rec.visual_win, rec.audio_win, rec.question) -
        pair.logratio(rec.lose_response, rec.visual_win, rec.audio_win, rec.question);
    const double loss = softplus(-gap);
    auto& slot = acc[rec.category];
    slot.first += loss;
    slot.second += 1;
    total += loss;
  }
  TailArm arm;
  arm.mean_loss = total / static_cast<double>(heldout.size());
  for (const auto& [name, s] : acc) {
    const double mean = s.first / s.second;
    arm.category_loss[name] = mean;
    arm.worst_category_loss = std::max(arm.worst_category_loss, mean);
  }
  return arm;
}

TailArm run_arm(double lambda, const std::vector<PreferenceRecord>& trainset,
                const std::vector<PreferenceRecord>& heldout, std::uint64_t seed,
                const TailOptions& opts) {
  RobustConfig cfg;
  cfg.lambda_y = lambda;
  cfg.lambda_v = lambda;
  cfg.lambda_a = lambda;
  cfg.tilt = Tilt::kTheorem;

  BetaCalibrator cal;
  cal.text_similarity = std::make_shared<CosineSimilarity>();
  cal.av_similarity = std::make_shared<CosineSimilarity>();
  cal.response_embedder =
      std::make_shared<TokenEmbedder>(opts.dims.vocab_size, opts.dims.feature_dim, seed ^ 0xabcd);

  PolicyModel init(opts.dims, "tail-policy", seed ^ 0x51);
  TrainState state(ModelPair(init, init), seed);
  TrainOptions topts;
  topts.epochs = opts.epochs;
  topts.batch_size = opts.batch_size;
  topts.lr = opts.lr;
  train(state, trainset, topts, cal, cfg);
  return evaluate_heldout(state.pair, heldout);
}

}  // namespace

TailReport tail_experiment(double skew, std::span<const double> lambda_grid,
                           std::uint64_t seed, const TailOptions& opts) {
  if (lambda_grid.empty()) throw ValidationError("tail_experiment: empty lambda grid");
  const auto trainset = make_tail_dataset(opts.train_size, skew, opts.dims, seed);
  const auto heldout = make_tail_dataset(opts.heldout_size, skew, opts.dims, seed + 1);

  TailReport report;
  report.skew = skew;
  report.seed = seed;
  for (double lambda : lambda_grid) {
    TailRow row;
    row.lambda = lambda;
    row.robust = run_arm(lambda, trainset, heldout, seed, opts);
    row.baseline = run_arm(kMeanRiskLambda, trainset, heldout, seed, opts);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_tail_report(const std::string& path, const TailReport& report) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write tail report '" + path + "'");
  for (const auto& row : report.rows) {
    nlohmann::json j;
    j["skew"] = report.skew;
    j["seed"] = report.seed;
    j["lambda"] = row.lambda;
    j["robust_worst"] = row.robust.worst_category_loss;
    j["robust_mean"] = row.robust.mean_loss;
    j["robust_per_category"] = row.robust.category_loss;
    j["baseline_worst"] = row.baseline.worst_category_loss;
    j["baseline_mean"] = row.baseline.mean_loss;
    j["baseline_per_category"] = row.baseline.category_loss;
    out << j.dump() << "\n";
  }
}

std::string format_tail_report(const TailReport& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "tail experiment  skew=%.2f  seed=%llu\n", report.skew,
                static_cast<unsigned long long>(report.seed));
  out += buf;
  std::snprintf(buf, sizeof buf, "%10s %14s %14s %14s %14s\n", "lambda", "robust_worst",
                "robust_mean", "base_worst", "base_mean");
  out += buf;
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%10.4g %14.6f %14.6f %14.6f %14.6f\n", row.lambda,
                  row.robust.worst_category_loss, row.robust.mean_loss,
                  row.baseline.worst_category_loss, row.baseline.mean_loss);
    out += buf;
  }
  return out;
}

}  // namespace cavpref::policy

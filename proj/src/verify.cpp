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

#include "cavpref/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cavpref/objective.hpp"
#include "cavpref/rng.hpp"
#include "cavpref/synthetic.hpp"

namespace cavpref::cli {

bool VerifyLedger::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.pass; });
}

namespace {

VerifyCheck check_pair_identity(std::uint64_t seed) {
  VerifyCheck check{"dpo-identity", true, 0.0, "1000 random (logratios, beta) pairs"};
  Rng rng(seed);
  for (int i = 0; i < 1000; ++i) {
    const LogRatioPair lr{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const double beta = rng.uniform(0.1, 1.0);
    const double a = pair_preference_loss(lr, beta);
    const double b = dpo_identity(lr, beta);
    const double rel = std::abs(a + b) / std::max(std::abs(a), std::abs(b));
    check.worst_error = std::max(check.worst_error, rel);
  }
  check.pass = check.worst_error <= 1e-10;
  return check;
}

VerifyCheck check_dro_oracle(std::uint64_t seed, int instances) {
  VerifyCheck check{"dro-oracle-equivalence", true, 0.0,
                    std::to_string(instances) + " random instances, support <= 5"};
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    const std::size_t n = 2 + rng.uniform_int(4);
    std::vector<double> losses(n), p(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      losses[k] = rng.uniform(0.0, 5.0);
      p[k] = 0.05 + rng.uniform();
      sum += p[k];
    }
    for (auto& w : p) w /= sum;
    const double lambda = rng.uniform(0.3, 4.0);

    const DroSolution sol = dro_oracle(losses, p, lambda);

    std::vector<double> scaled(n);
    for (std::size_t k = 0; k < n; ++k) scaled[k] = losses[k] / lambda + std::log(p[k]);
    const double m = *std::max_element(scaled.begin(), scaled.end());
    double z = 0.0;
    for (double s : scaled) z += std::exp(s - m);
    const double closed_value = lambda * (m + std::log(z));

    double tv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double q_closed = std::exp(scaled[k] - m) / z;
      tv += std::abs(sol.q_star[k] - q_closed);
    }
    tv *= 0.5;
    const double err = std::max(std::abs(sol.value - closed_value), tv);
    check.worst_error = std::max(check.worst_error, err);
  }
  check.pass = check.worst_error <= 1e-6;
  return check;
}

VerifyCheck check_constant_batch(std::uint64_t seed) {
  VerifyCheck check{"constant-batch-invariance", true, 0.0,
                    "constant vectors under both tilts"};
  Rng rng(seed);
  for (int i = 0; i < 50; ++i) {
    const double lambda = rng.uniform(0.1, 10.0);
    const std::size_t n = 1 + rng.uniform_int(8);
    const double c = rng.uniform(0.0, 5.0);
    const std::vector<double> neg(n, -c), pos(n, c);
    check.worst_error = std::max(
        check.worst_error,
        std::abs(robust_aggregate(neg, lambda, Tilt::kPseudocode) - c));
    check.worst_error = std::max(
        check.worst_error, std::abs(robust_aggregate(pos, lambda, Tilt::kTheorem) - c));
  }
  check.pass = check.worst_error <= 1e-9;
  return check;
}

VerifyCheck check_lambda_limit(std::uint64_t seed) {
  VerifyCheck check{"lambda-limit", true, 0.0, "lambda=1e6 against the plain mean"};
  Rng rng(seed);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.uniform_int(10);
    std::vector<double> losses(n);
    double mean = 0.0;
    for (auto& l : losses) {
      l = rng.uniform(0.0, 10.0);
      mean += l;
    }
    mean /= static_cast<double>(n);
    check.worst_error = std::max(
        check.worst_error, std::abs(robust_aggregate(losses, 1e6, Tilt::kTheorem) - mean));
  }
  check.pass = check.worst_error <= 1e-4;
  return check;
}

VerifyCheck check_tilt_ordering(std::uint64_t seed, bool inject_mismatch) {
  VerifyCheck check{"tilt-ordering", true, 0.0,
                    "theorem > mean > pseudocode on non-constant losses"};
  Rng rng(seed);
  double worst_violation = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.uniform_int(8);
    std::vector<double> pos(n), neg(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      pos[k] = rng.uniform(0.1, 4.0) + (k == 0 ? 1.0 : 0.0);
      neg[k] = -pos[k];
      mean += pos[k];
    }
    mean /= static_cast<double>(n);
    const double lambda = rng.uniform(0.5, 3.0);
    const double upper =
        robust_aggregate(pos, lambda, inject_mismatch ? Tilt::kPseudocode : Tilt::kTheorem);
    const double lower = robust_aggregate(neg, lambda, Tilt::kPseudocode);
    worst_violation = std::max(worst_violation, mean - upper);
    worst_violation = std::max(worst_violation, lower - mean);
  }
  check.worst_error = std::max(0.0, worst_violation);
  check.pass = worst_violation <= 0.0;
  if (!check.pass) check.detail = "ordering violated; tilt conventions disagree";
  return check;
}

VerifyCheck check_gradient(const RunConfig& config, bool corrupt) {
  VerifyCheck check{"gradient-check", true, 0.0, "3 seeded toy configurations, h=1e-5"};
  for (int trial = 0; trial < 3; ++trial) {
    const std::uint64_t seed = config.seed + 97 * static_cast<std::uint64_t>(trial);
    policy::PolicyDims dims{6, 4, 16};
    auto model = policy::PolicyModel::random_init(dims, "verify", seed, seed + 1, 0.4);
    auto reference = policy::PolicyModel::random_init(dims, "verify-ref", seed, seed + 2, 0.4);
    policy::TrainState state(policy::ModelPair(model, reference), seed);
    const auto batch = policy::make_mixed_batch(18, dims, seed + 3);

    BetaCalibrator cal = config.calibrator();
    cal.response_embedder =
        std::make_shared<TokenEmbedder>(dims.vocab_size, dims.feature_dim, config.embed_seed);
    const RobustConfig cfg = config.robust_config();

    const Matrix* override_grad = nullptr;
    Matrix corrupted;
    if (corrupt) {
      corrupted = policy::cavpref_gradient(state, batch, cal, cfg);
      std::size_t argmax = 0;
      for (std::size_t i = 1; i < corrupted.data.size(); ++i) {
        if (std::abs(corrupted.data[i]) > std::abs(corrupted.data[argmax])) argmax = i;
      }
      corrupted.data[argmax] *= 2.0;
      override_grad = &corrupted;
    }
    const auto report =
        policy::finite_diff_check(state, batch, cal, cfg, 1e-5, 1e-4, override_grad);
    check.worst_error = std::max(check.worst_error, report.max_rel_err);
    if (!report.pass) {
      check.pass = false;
      check.detail = report.note;
    }
  }
  return check;
}

VerifyCheck check_beta_bounds(const RunConfig& config, std::uint64_t seed) {
  VerifyCheck check{"beta-bounds", true, 0.0,
                    "100 random batches: range, monotonicity, degenerate midpoint"};
  Rng rng(seed);
  BetaCalibrator cal = config.calibrator();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.uniform_int(12);
    std::vector<double> win(n), lose(n);
    for (std::size_t k = 0; k < n; ++k) {
      win[k] = rng.uniform();
      lose[k] = rng.uniform();
    }
    const auto betas = calibrate_beta(win, lose, cal);
    for (double b : betas) {
      worst = std::max(worst, std::max(0.1 - b, b - 1.0));
    }
    // Weak monotonicity in the raw gap.
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        if (win[p] - lose[p] < win[q] - lose[q] && betas[p] > betas[q] + 1e-12) {
          worst = std::max(worst, betas[p] - betas[q]);
        }
      }
    }
  }
  {
    const std::vector<double> win(5, 0.3), lose(5, 0.1);
    for (double b : calibrate_beta(win, lose, cal)) {
      worst = std::max(worst, std::abs(b - (0.5 * cal.slope + cal.intercept)));
    }
  }
  check.worst_error = std::max(0.0, worst);
  check.pass = worst <= 1e-12;
  return check;
}

}  // namespace

VerifyLedger run_verification(const RunConfig& config, VerifyFault fault) {
  config.validate();
  VerifyLedger ledger;
  ledger.checks.push_back(check_pair_identity(config.seed));
  ledger.checks.push_back(check_dro_oracle(config.seed + 1, 50));
  ledger.checks.push_back(check_constant_batch(config.seed + 2));
  ledger.checks.push_back(check_lambda_limit(config.seed + 3));
  ledger.checks.push_back(
      check_tilt_ordering(config.seed + 4, fault == VerifyFault::kTiltMismatch));
  ledger.checks.push_back(check_gradient(config, fault == VerifyFault::kGradientCorruption));
  ledger.checks.push_back(check_beta_bounds(config, config.seed + 5));
  return ledger;
}

std::string format_ledger(const VerifyLedger& ledger) {
  std::string out;
  char buf[256];
  for (const auto& c : ledger.checks) {
    std::snprintf(buf, sizeof buf, "[%s] %-28s worst error %.3e  %s\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.worst_error,
                  c.detail.c_str());
    out += buf;
  }
  out += ledger.all_pass() ? "verification: all checks passed\n"
                           : "verification: FAILURES present\n";
  return out;
}

}  // namespace cavpref::cli

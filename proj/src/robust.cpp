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

#include "cavpref/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cavpref/error.hpp"
#include "cavpref/math_util.hpp"

namespace cavpref {

std::string to_string(Tilt t) {
  return t == Tilt::kPseudocode ? "pseudocode" : "theorem";
}

Tilt tilt_from_string(const std::string& name) {
  if (name == "pseudocode") return Tilt::kPseudocode;
  if (name == "theorem") return Tilt::kTheorem;
  throw ValidationError("unknown tilt '" + name + "' (expected pseudocode|theorem)");
}

void RobustConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("RobustConfig: ") + name +
                            " must be a positive finite real, got " + std::to_string(v));
    }
  };
  positive(lambda_y, "lambda_y");
  positive(lambda_v, "lambda_v");
  positive(lambda_a, "lambda_a");
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("robust_aggregate: lambda must be positive, got " +
                          std::to_string(lambda));
  }
}

}  // namespace

double robust_aggregate(std::span<const double> losses, double lambda, Tilt tilt) {
  check_lambda(lambda);
  if (losses.empty()) throw ValidationError("robust_aggregate: empty loss vector");
  check_finite(losses, "losses");

  std::vector<double> scaled(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) scaled[i] = losses[i] / lambda;
  const double lme = log_mean_exp(scaled);
  return tilt == Tilt::kPseudocode ? -lambda * lme : lambda * lme;
}

RobustAggregate robust_aggregate_grad(std::span<const double> losses, double lambda,
                                      Tilt tilt) {
  check_lambda(lambda);
  if (losses.empty()) throw ValidationError("robust_aggregate: empty loss vector");
  check_finite(losses, "losses");

  const std::size_t n = losses.size();
  const double m = *std::max_element(losses.begin(), losses.end());
  std::vector<double> w(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp((losses[i] - m) / lambda);
    z += w[i];
  }

  RobustAggregate out;
  const double lme = m / lambda + std::log(z) - std::log(static_cast<double>(n));
  out.value = (tilt == Tilt::kPseudocode ? -lambda : lambda) * lme;
  out.dvalue_dloss.resize(n);
  const double sign = tilt == Tilt::kPseudocode ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) out.dvalue_dloss[i] = sign * w[i] / z;
  return out;
}

namespace {

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_simplex(std::vector<double> v) {
  const std::size_t n = v.size();
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (1.0 - cum) / static_cast<double>(j + 1);
    if (u[j] + t > 0.0) {
      rho = j + 1;
      tau = t;
    }
  }
  for (auto& x : v) x = std::max(x + tau, 0.0);
  return v;
}

double dro_objective(const std::vector<double>& q, std::span<const double> l,
                     std::span<const double> p, double lambda) {
  double val = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    val += q[i] * l[i];
    if (q[i] > 0.0) val -= lambda * q[i] * std::log(q[i] / p[i]);
  }
  return val;
}

}  // namespace

DroSolution dro_oracle(std::span<const double> losses,
                       std::span<const double> base_weights, double lambda) {
  check_lambda(lambda);
  const std::size_t n = losses.size();
  if (n == 0) throw ValidationError("dro_oracle: empty support");
  if (n > 16) {
    throw ValidationError("dro_oracle: support size " + std::to_string(n) +
                          " exceeds the brute-force limit of 16");
  }
  if (base_weights.size() != n) {
    throw ValidationError("dro_oracle: losses and base_weights differ in length");
  }
  check_finite(losses, "losses");
  check_finite(base_weights, "base_weights");

  double sum = 0.0;
  for (double w : base_weights) {
    if (!(w > 0.0)) throw ValidationError("dro_oracle: base_weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("dro_oracle: base_weights must sum to 1 (got " +
                          std::to_string(sum) + ")");
  }
  std::vector<double> p(base_weights.begin(), base_weights.end());
  for (auto& w : p) w /= sum;

  // Ascent from the base distribution. The entropic barrier keeps the
  // optimum strictly interior, so projected steps with backtracking converge
  // linearly; 1e5 iterations is far more than needed at n <= 16.
  std::vector<double> q(p);
  double fq = dro_objective(q, losses, p, lambda);
  double step = 1.0 / (1.0 + lambda);
  const double kTiny = 1e-300;

  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = losses[i] - lambda * (std::log(std::max(q[i], kTiny) / p[i]) + 1.0);
    }
    std::vector<double> trial(n);
    double ft = 0.0;
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = q[i] + t * grad[i];
      trial = project_simplex(std::move(trial));
      ft = dro_objective(trial, losses, p, lambda);
      if (ft >= fq) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(trial[i] - q[i]));
    q = trial;
    const double gain = ft - fq;
    fq = ft;
    step = std::min(t * 2.0, 1e6);
    if (delta < 1e-14 && gain < 1e-15) break;
  }

  return DroSolution{fq, std::move(q)};
}

}  // namespace cavpref

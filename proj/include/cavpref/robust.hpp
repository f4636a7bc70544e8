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
#include <string>
#include <vector>

namespace cavpref {

// Direction of the exponential reweighting inside the batch aggregation.
//
// The worst case of E_Q[l] over distributions Q within a KL ball around the
// empirical distribution P has the closed form
//
//     sup_Q { E_Q[l] - lambda * KL(Q||P) } = lambda * log E_P[ e^{l/lambda} ],
//
// attained at Q* proportional to P * e^{l/lambda}. With the non-negative
// per-sample loss l = -log sigma(.) this upweights hard samples; that is
// kTheorem.
//
// kPseudocode instead applies the tilt directly to the log-sigmoid values
// L = log sigma(.) <= 0 and returns -lambda * log E_P[ e^{L/lambda} ]. The
// two are not algebraically equal: the kPseudocode direction is dominated by
// the easy samples. Both conventions are kept behind this flag; training
// defaults to kTheorem.
enum class Tilt { kPseudocode, kTheorem };

std::string to_string(Tilt t);
Tilt tilt_from_string(const std::string& name);

// Per-channel robustness temperatures. rho is never assigned a numeric value
// anywhere; the penalty is parameterized directly by the Lagrange
// multipliers lambda_*, and rho_note exists purely as documentation of the
// implicit radius.
struct RobustConfig {
  double lambda_y = 1.0;
  double lambda_v = 1.0;
  double lambda_a = 0.8;
  Tilt tilt = Tilt::kTheorem;
  double rho_note = 0.0;

  void validate() const;  // all lambdas strictly positive
};

// KL-tilted aggregation of a loss vector. Input convention depends on the
// tilt: kPseudocode expects the log-sigmoid values L <= 0 and returns
// -lambda * log mean(e^{L/lambda}); kTheorem expects the non-negative losses
// l = -L and returns lambda * log mean(e^{l/lambda}). Either way a constant
// vector c maps to |c| under its convention, and lambda -> infinity recovers
// the plain mean. Computed with a max-shifted reduction; safe for
// |loss|/lambda up to ~700.
double robust_aggregate(std::span<const double> losses, double lambda, Tilt tilt);

// Aggregate plus its gradient with respect to each input loss.
struct RobustAggregate {
  double value = 0.0;
  std::vector<double> dvalue_dloss;
};

RobustAggregate robust_aggregate_grad(std::span<const double> losses, double lambda,
                                      Tilt tilt);

// Brute-force verification oracle for the closed form above: maximizes
//
//     f(q) = sum_i q_i * losses_i - lambda * sum_i q_i log(q_i / p_i)
//
// over the probability simplex by projected gradient ascent with Armijo
// backtracking. Deliberately independent of the exponential-tilt route; used
// only in tests and `verify`. Supports up to 16 atoms.
struct DroSolution {
  double value = 0.0;
  std::vector<double> q_star;
};

DroSolution dro_oracle(std::span<const double> losses,
                       std::span<const double> base_weights, double lambda);

}  // namespace cavpref

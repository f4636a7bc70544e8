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
#include <span>
#include <string>
#include <vector>

#include "cavpref/math_util.hpp"
#include "cavpref/objective.hpp"
#include "cavpref/similarity.hpp"

namespace cavpref::policy {

struct PolicyDims {
  int vocab_size = 8;
  int feature_dim = 6;
  int context_window = 32;

  void validate() const;
  // [visual | audio | mean-pooled question | previous-token one-hot]
  int input_dim() const { return 3 * feature_dim + vocab_size; }
};

struct Conditioning {
  std::span<const double> visual;
  std::span<const double> audio;
  std::span<const int> question;
};

// Single linear-softmax token model. Per decoding step the input is the
// concatenation of the two conditioning vectors, the mean-pooled fixed
// question embedding and a one-hot of the previous token (zeros at the first
// step); logits are W * x. Zero weights give the uniform distribution over
// the vocabulary, and every sequence has strictly positive probability.
class PolicyModel {
 public:
  PolicyModel(PolicyDims dims, std::string id, std::uint64_t embed_seed);

  static PolicyModel random_init(PolicyDims dims, std::string id,
                                 std::uint64_t embed_seed, std::uint64_t weight_seed,
                                 double scale = 0.5);

  const PolicyDims& dims() const { return dims_; }
  const std::string& id() const { return id_; }
  std::uint64_t embed_seed() const { return embed_seed_; }
  Matrix& weights() { return weights_; }
  const Matrix& weights() const { return weights_; }
  const TokenEmbedder& question_embedder() const { return question_embedder_; }

  // Sum of per-token conditional log-probabilities; 0 for the empty
  // response. Rejects out-of-vocabulary tokens with their position and
  // responses longer than the context window.
  double sequence_logprob(std::span<const int> response, const Conditioning& cond) const;

  // Adds coeff * d(sequence_logprob)/dW into grad.
  void accumulate_logprob_grad(std::span<const int> response, const Conditioning& cond,
                               double coeff, Matrix& grad) const;

  // Per-step log-probability vector over the vocabulary (normalized in log
  // space), exposed for the normalization property tests.
  std::vector<double> step_logprobs(const Conditioning& cond, int prev_token) const;

 private:
  std::vector<double> step_input(const Conditioning& cond, int prev_token) const;

  PolicyDims dims_;
  std::string id_;
  std::uint64_t embed_seed_;
  TokenEmbedder question_embedder_;
  Matrix weights_;
};

// Concrete (pi_theta, pi_ref) pair over two toy models. The reference is
// frozen by convention: nothing in this repository mutates it after
// construction.
class ModelPair : public PolicyPair {
 public:
  ModelPair(PolicyModel policy, PolicyModel reference);

  double logratio(std::span<const int> response, std::span<const double> visual,
                  std::span<const double> audio,
                  std::span<const int> question) const override;

  PolicyModel& model() { return policy_; }
  const PolicyModel& model() const { return policy_; }
  const PolicyModel& reference() const { return reference_; }

 private:
  PolicyModel policy_;
  PolicyModel reference_;
};

// Versioned JSON checkpoint of {dims, weights, seeds, step}.
void save_checkpoint(const std::string& path, const ModelPair& pair, std::int64_t step,
                     std::uint64_t rng_seed);
struct Checkpoint {
  ModelPair pair;
  std::int64_t step = 0;
  std::uint64_t rng_seed = 0;
};
Checkpoint load_checkpoint(const std::string& path);

std::string serialize_weights(const PolicyModel& model);

}  // namespace cavpref::policy

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
#include <vector>

#include "cavpref/math_util.hpp"

namespace cavpref {

// Scores a (reference, candidate) pair of embedding vectors in [0, 1].
// Production encoders live behind this interface; the bundled implementation
// below is the desk-scale stand-in.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double score(std::span<const double> reference,
                       std::span<const double> candidate) const = 0;
};

// Cosine similarity mapped to [0, 1] via (1 + cos) / 2. A zero vector on
// either side scores 0.5 (cosine taken as 0).
class CosineSimilarity : public SimilarityProvider {
 public:
  double score(std::span<const double> reference,
               std::span<const double> candidate) const override;
};

double cosine(std::span<const double> a, std::span<const double> b);

// Fixed random token embedding table, mean-pooled over a sequence. The table
// is seeded and never trained, which keeps the parameter count of the toy
// policies down to the single linear layer.
class TokenEmbedder {
 public:
  TokenEmbedder(int vocab_size, int dim, std::uint64_t seed);

  int vocab_size() const { return vocab_size_; }
  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  // Mean of the row embeddings; an empty sequence embeds to the zero vector.
  // Out-of-vocabulary tokens are rejected with their position.
  std::vector<double> embed(std::span<const int> tokens) const;

  std::span<const double> row(int token) const;

 private:
  int vocab_size_;
  int dim_;
  std::uint64_t seed_;
  Matrix table_;
};

}  // namespace cavpref

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

#include "cavpref/similarity.hpp"

#include <cmath>

#include "cavpref/error.hpp"
#include "cavpref/rng.hpp"

namespace cavpref {

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double CosineSimilarity::score(std::span<const double> reference,
                               std::span<const double> candidate) const {
  return 0.5 * (1.0 + cosine(reference, candidate));
}

TokenEmbedder::TokenEmbedder(int vocab_size, int dim, std::uint64_t seed)
    : vocab_size_(vocab_size), dim_(dim), seed_(seed),
      table_(static_cast<std::size_t>(vocab_size), static_cast<std::size_t>(dim)) {
  if (vocab_size <= 0 || dim <= 0) {
    throw ValidationError("TokenEmbedder: vocab_size and dim must be positive");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (auto& v : table_.data) v = rng.normal(0.0, scale);
}

std::vector<double> TokenEmbedder::embed(std::span<const int> tokens) const {
  std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
  if (tokens.empty()) return out;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const int tok = tokens[t];
    if (tok < 0 || tok >= vocab_size_) {
      throw ValidationError("token " + std::to_string(tok) + " out of vocabulary at position " +
                            std::to_string(t));
    }
    for (int k = 0; k < dim_; ++k) {
      out[static_cast<std::size_t>(k)] += table_(static_cast<std::size_t>(tok),
                                                 static_cast<std::size_t>(k));
    }
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (auto& v : out) v *= inv;
  return out;
}

std::span<const double> TokenEmbedder::row(int token) const {
  if (token < 0 || token >= vocab_size_) {
    throw ValidationError("token " + std::to_string(token) + " out of vocabulary");
  }
  return std::span<const double>(table_.data)
      .subspan(static_cast<std::size_t>(token) * static_cast<std::size_t>(dim_),
               static_cast<std::size_t>(dim_));
}

}  // namespace cavpref

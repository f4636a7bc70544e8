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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cavpref/error.hpp"

namespace cavpref {

// log(1 + e^x), branch-stable for large |x|.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// log sigma(x) = -log(1 + e^{-x}).
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log((1/n) * sum_i e^{x_i}) with the usual max shift, so that no
// exponentiation overflows for finite inputs.
inline double log_mean_exp(std::span<const double> xs) {
  if (xs.empty()) throw ValidationError("log_mean_exp: empty input");
  const double m = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc) - std::log(static_cast<double>(xs.size()));
}

inline void check_finite(double x, const std::string& field) {
  if (!std::isfinite(x)) {
    throw ValidationError("non-finite value in field '" + field + "'");
  }
}

inline void check_finite(std::span<const double> xs, const std::string& field) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw ValidationError("non-finite value in field '" + field + "' at index " +
                            std::to_string(i));
    }
  }
}

// Dense row-major matrix. Deliberately minimal: the policies in this project
// are small enough that a plain vector-of-doubles wins over a linear algebra
// dependency.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::size_t size() const { return data.size(); }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
  }
};

inline double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace cavpref

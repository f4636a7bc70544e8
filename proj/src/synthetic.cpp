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

#include "cavpref/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "cavpref/error.hpp"
#include "cavpref/rng.hpp"

namespace cavpref::policy {

namespace {

std::vector<double> noisy_axis(int axis, int dim, double noise, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  if (axis >= 0) v[static_cast<std::size_t>(axis % dim)] = 1.0;
  for (auto& x : v) x += rng.normal(0.0, noise);
  return v;
}

void attach_losing_conditioning(PreferenceRecord& rec, int donor_axis, int dim,
                                Rng& rng) {
  switch (rec.task_kind) {
    case TaskKind::kMvit:
    case TaskKind::kCotSwap:
      rec.visual_lose = noisy_axis(donor_axis, dim, 0.15, rng);
      break;
    case TaskKind::kMvt:
      // Deletion, not substitution.
      rec.visual_lose = std::vector<double>(static_cast<std::size_t>(dim), 0.0);
      break;
    case TaskKind::kMait:
      rec.audio_lose = noisy_axis(donor_axis, dim, 0.15, rng);
      break;
    case TaskKind::kMat:
      rec.audio_lose = std::vector<double>(static_cast<std::size_t>(dim), 0.0);
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<PreferenceRecord> make_mixed_batch(int n, const PolicyDims& dims,
                                               std::uint64_t seed) {
  dims.validate();
  Rng rng(seed);
  std::vector<PreferenceRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PreferenceRecord rec;
    rec.id = "mix-" + std::to_string(i);
    rec.task_kind = kAllTaskKinds[static_cast<std::size_t>(i) % kAllTaskKinds.size()];
    rec.category = (i % 2 == 0) ? "even" : "odd";

    auto rand_vec = [&] {
      std::vector<double> v(static_cast<std::size_t>(dims.feature_dim));
      for (auto& x : v) x = rng.uniform(-1.0, 1.0);
      return v;
    };
    auto rand_seq = [&](std::size_t len) {
      std::vector<int> s(len);
      for (auto& t : s) t = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dims.vocab_size)));
      return s;
    };

    rec.visual_win = rand_vec();
    rec.audio_win = rand_vec();
    rec.question = rand_seq(1 + rng.uniform_int(2));
    rec.win_response = rand_seq(1 + rng.uniform_int(3));
    do {
      rec.lose_response = rand_seq(1 + rng.uniform_int(3));
    } while (rec.lose_response == rec.win_response);

    if (switch_eta(rec.task_kind) == 1 && rec.task_kind != TaskKind::kMvt) {
      rec.visual_lose = rand_vec();
    } else if (rec.task_kind == TaskKind::kMvt) {
      rec.visual_lose = std::vector<double>(static_cast<std::size_t>(dims.feature_dim), 0.0);
    }
    if (rec.task_kind == TaskKind::kMait) {
      rec.audio_lose = rand_vec();
    } else if (rec.task_kind == TaskKind::kMat) {
      rec.audio_lose = std::vector<double>(static_cast<std::size_t>(dims.feature_dim), 0.0);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PreferenceRecord> make_separable_dataset(int n, const PolicyDims& dims,
                                                     std::uint64_t seed) {
  dims.validate();
  const int concepts = std::min(dims.feature_dim, dims.vocab_size);
  if (concepts < 2) throw ValidationError("make_separable_dataset: need at least 2 concepts");
  Rng rng(seed);
  std::vector<PreferenceRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int topic = i % concepts;
    const int other = (topic + 1) % concepts;
    const int donor = (topic + 2) % concepts;

    PreferenceRecord rec;
    rec.id = "sep-" + std::to_string(i);
    rec.task_kind = kAllTaskKinds[static_cast<std::size_t>(i) % kAllTaskKinds.size()];
    rec.category = (topic % 2 == 0) ? "even" : "odd";
    rec.visual_win = noisy_axis(topic, dims.feature_dim, 0.1, rng);
    rec.audio_win = noisy_axis(topic, dims.feature_dim, 0.1, rng);
    rec.question = {topic};
    rec.win_response = {topic};
    rec.lose_response = {other};
    attach_losing_conditioning(rec, donor, dims.feature_dim, rng);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PreferenceRecord> make_tail_dataset(int n, double skew,
                                                const PolicyDims& dims,
                                                std::uint64_t seed) {
  dims.validate();
  if (!(skew > 0.0) || !(skew < 1.0)) {
    throw ValidationError("make_tail_dataset: skew must lie in (0, 1)");
  }
  if (dims.vocab_size < 2) throw ValidationError("make_tail_dataset: vocab too small");
  Rng rng(seed);

  const int minority = std::max(1, static_cast<int>(std::lround(skew * n)));
  std::vector<PreferenceRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool tail = i < minority;
    PreferenceRecord rec;
    rec.id = (tail ? "tail-" : "head-") + std::to_string(i);
    rec.task_kind = TaskKind::kMcit;
    rec.category = tail ? "tail" : "head";
    // Shared conditioning direction: the two categories pull the same
    // parameters in opposite directions.
    std::vector<double> shared(static_cast<std::size_t>(dims.feature_dim),
                               1.0 / std::sqrt(static_cast<double>(dims.feature_dim)));
    for (auto& x : shared) x += rng.normal(0.0, 0.05);
    rec.visual_win = shared;
    rec.audio_win = shared;
    rec.question = {};
    // Token orders [0,1] vs [1,0]; identical mean-pooled embeddings keep the
    // beta calibration at the degenerate midpoint.
    if (tail) {
      rec.win_response = {1, 0};
      rec.lose_response = {0, 1};
    } else {
      rec.win_response = {0, 1};
      rec.lose_response = {1, 0};
    }
    out.push_back(std::move(rec));
  }
  rng.shuffle(out);
  return out;
}

}  // namespace cavpref::policy

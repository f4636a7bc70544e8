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

#include "cavpref/policy_model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"
#include "cavpref/rng.hpp"

namespace cavpref::policy {

void PolicyDims::validate() const {
  if (vocab_size < 1 || vocab_size > 64) {
    throw ValidationError("PolicyDims: vocab_size must be in [1, 64], got " +
                          std::to_string(vocab_size));
  }
  if (feature_dim < 1 || feature_dim > 32) {
    throw ValidationError("PolicyDims: feature_dim must be in [1, 32], got " +
                          std::to_string(feature_dim));
  }
  if (context_window < 1) {
    throw ValidationError("PolicyDims: context_window must be positive");
  }
}

PolicyModel::PolicyModel(PolicyDims dims, std::string id, std::uint64_t embed_seed)
    : dims_(dims), id_(std::move(id)), embed_seed_(embed_seed),
      question_embedder_(dims.vocab_size, dims.feature_dim, embed_seed),
      weights_(static_cast<std::size_t>(dims.vocab_size),
               static_cast<std::size_t>(dims.input_dim())) {
  dims_.validate();
}

PolicyModel PolicyModel::random_init(PolicyDims dims, std::string id,
                                     std::uint64_t embed_seed, std::uint64_t weight_seed,
                                     double scale) {
  PolicyModel m(dims, std::move(id), embed_seed);
  Rng rng(weight_seed);
  for (auto& w : m.weights_.data) w = rng.normal(0.0, scale);
  return m;
}

std::vector<double> PolicyModel::step_input(const Conditioning& cond, int prev_token) const {
  const std::size_t f = static_cast<std::size_t>(dims_.feature_dim);
  if (cond.visual.size() != f || cond.audio.size() != f) {
    throw ValidationError("conditioning vectors must have dimension " + std::to_string(f));
  }
  std::vector<double> x(static_cast<std::size_t>(dims_.input_dim()), 0.0);
  std::copy(cond.visual.begin(), cond.visual.end(), x.begin());
  std::copy(cond.audio.begin(), cond.audio.end(), x.begin() + f);
  const auto q = question_embedder_.embed(cond.question);
  std::copy(q.begin(), q.end(), x.begin() + 2 * f);
  if (prev_token >= 0) x[3 * f + static_cast<std::size_t>(prev_token)] = 1.0;
  return x;
}

std::vector<double> PolicyModel::step_logprobs(const Conditioning& cond,
                                               int prev_token) const {
  const auto x = step_input(cond, prev_token);
  const std::size_t v = static_cast<std::size_t>(dims_.vocab_size);
  std::vector<double> logits(v, 0.0);
  for (std::size_t r = 0; r < v; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) acc += weights_(r, c) * x[c];
    logits[r] = acc;
  }
  const double lme = log_mean_exp(logits) + std::log(static_cast<double>(v));
  for (auto& l : logits) l -= lme;
  return logits;
}

double PolicyModel::sequence_logprob(std::span<const int> response,
                                     const Conditioning& cond) const {
  if (response.size() > static_cast<std::size_t>(dims_.context_window)) {
    throw ValidationError("response length " + std::to_string(response.size()) +
                          " exceeds context window " + std::to_string(dims_.context_window));
  }
  double total = 0.0;
  int prev = -1;
  for (std::size_t t = 0; t < response.size(); ++t) {
    const int tok = response[t];
    if (tok < 0 || tok >= dims_.vocab_size) {
      throw ValidationError("token " + std::to_string(tok) +
                            " out of vocabulary at position " + std::to_string(t));
    }
    const auto lp = step_logprobs(cond, prev);
    total += lp[static_cast<std::size_t>(tok)];
    prev = tok;
  }
  return total;
}

void PolicyModel::accumulate_logprob_grad(std::span<const int> response,
                                          const Conditioning& cond, double coeff,
                                          Matrix& grad) const {
  if (grad.rows != weights_.rows || grad.cols != weights_.cols) {
    throw ValidationError("gradient matrix shape mismatch");
  }
  int prev = -1;
  for (std::size_t t = 0; t < response.size(); ++t) {
    const int tok = response[t];
    if (tok < 0 || tok >= dims_.vocab_size) {
      throw ValidationError("token " + std::to_string(tok) +
                            " out of vocabulary at position " + std::to_string(t));
    }
    const auto x = step_input(cond, prev);
    const auto lp = step_logprobs(cond, prev);
    // d log softmax(Wx)[tok] / dW[r][c] = (1[r==tok] - p_r) * x_c
    for (std::size_t r = 0; r < weights_.rows; ++r) {
      const double pr = std::exp(lp[r]);
      const double factor = coeff * ((r == static_cast<std::size_t>(tok) ? 1.0 : 0.0) - pr);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < weights_.cols; ++c) grad(r, c) += factor * x[c];
    }
    prev = tok;
  }
}

ModelPair::ModelPair(PolicyModel policy, PolicyModel reference)
    : policy_(std::move(policy)), reference_(std::move(reference)) {
  if (policy_.dims().vocab_size != reference_.dims().vocab_size ||
      policy_.dims().feature_dim != reference_.dims().feature_dim) {
    throw ValidationError("ModelPair: policy and reference dimensions differ");
  }
}

double ModelPair::logratio(std::span<const int> response, std::span<const double> visual,
                           std::span<const double> audio,
                           std::span<const int> question) const {
  const Conditioning cond{visual, audio, question};
  return policy_.sequence_logprob(response, cond) -
         reference_.sequence_logprob(response, cond);
}

namespace {

using nlohmann::json;

json model_to_json(const PolicyModel& m) {
  json j;
  j["id"] = m.id();
  j["vocab_size"] = m.dims().vocab_size;
  j["feature_dim"] = m.dims().feature_dim;
  j["context_window"] = m.dims().context_window;
  j["embed_seed"] = m.embed_seed();
  std::vector<std::string> rows;
  char buf[32];
  std::string row;
  for (std::size_t r = 0; r < m.weights().rows; ++r) {
    row.clear();
    for (std::size_t c = 0; c < m.weights().cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m.weights()(r, c));
      if (c) row += ' ';
      row += buf;
    }
    rows.push_back(row);
  }
  j["weights"] = rows;
  return j;
}

PolicyModel model_from_json(const json& j) {
  PolicyDims dims;
  dims.vocab_size = j.at("vocab_size").get<int>();
  dims.feature_dim = j.at("feature_dim").get<int>();
  dims.context_window = j.at("context_window").get<int>();
  PolicyModel m(dims, j.at("id").get<std::string>(), j.at("embed_seed").get<std::uint64_t>());
  const auto rows = j.at("weights").get<std::vector<std::string>>();
  if (rows.size() != m.weights().rows) throw ValidationError("checkpoint: weight row count mismatch");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const char* p = rows[r].c_str();
    char* end = nullptr;
    for (std::size_t c = 0; c < m.weights().cols; ++c) {
      m.weights()(r, c) = std::strtod(p, &end);
      if (p == end) throw ValidationError("checkpoint: malformed weight row");
      p = end;
    }
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelPair& pair, std::int64_t step,
                     std::uint64_t rng_seed) {
  json j;
  j["format"] = "cavpref-checkpoint";
  j["version"] = 1;
  j["step"] = step;
  j["rng_seed"] = rng_seed;
  j["policy"] = model_to_json(pair.model());
  j["reference"] = model_to_json(pair.reference());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint '" + path + "'");
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint '" + path + "'");
  json j = json::parse(in, nullptr, true);
  if (j.value("format", "") != "cavpref-checkpoint" || j.value("version", 0) != 1) {
    throw ValidationError("'" + path + "' is not a version-1 checkpoint");
  }
  return Checkpoint{ModelPair(model_from_json(j.at("policy")), model_from_json(j.at("reference"))),
                    j.at("step").get<std::int64_t>(), j.at("rng_seed").get<std::uint64_t>()};
}

std::string serialize_weights(const PolicyModel& model) {
  return model_to_json(model).dump();
}

}  // namespace cavpref::policy

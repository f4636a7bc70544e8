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

#include "cavpref/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cavpref/error.hpp"

namespace cavpref::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ValidationError("unknown config key '" + where + key + "'");
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  robust_config().validate();
  policy_dims.validate();
  calibrator().validate();
  if (parallelism < 1) throw ValidationError("config: parallelism must be >= 1");
  if (!(train.lr >= 0.0)) throw ValidationError("config: train.lr must be non-negative");
  if (train.epochs < 0) throw ValidationError("config: train.epochs must be non-negative");
  if (train.batch_size < 1) throw ValidationError("config: train.batch_size must be >= 1");
}

RobustConfig RunConfig::robust_config() const {
  RobustConfig cfg;
  cfg.lambda_y = lambda_y;
  cfg.lambda_v = lambda_v;
  cfg.lambda_a = lambda_a;
  cfg.tilt = tilt;
  return cfg;
}

BetaCalibrator RunConfig::calibrator() const {
  BetaCalibrator cal;
  cal.slope = beta_slope;
  cal.intercept = beta_intercept;
  cal.text_similarity = std::make_shared<CosineSimilarity>();
  cal.av_similarity = std::make_shared<CosineSimilarity>();
  cal.response_embedder = std::make_shared<TokenEmbedder>(
      policy_dims.vocab_size, policy_dims.feature_dim, embed_seed);
  return cal;
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }

  reject_unknown_keys(j,
                      {"seed", "tilt", "lambdas", "beta", "policy", "train",
                       "parallelism", "extractor", "responder", "paths"},
                      "");

  RunConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("tilt")) c.tilt = tilt_from_string(j.at("tilt").get<std::string>());
  if (j.contains("lambdas")) {
    const json& l = j.at("lambdas");
    reject_unknown_keys(l, {"y", "v", "a"}, "lambdas.");
    c.lambda_y = l.value("y", c.lambda_y);
    c.lambda_v = l.value("v", c.lambda_v);
    c.lambda_a = l.value("a", c.lambda_a);
  }
  if (j.contains("beta")) {
    const json& b = j.at("beta");
    reject_unknown_keys(b, {"slope", "intercept"}, "beta.");
    c.beta_slope = b.value("slope", c.beta_slope);
    c.beta_intercept = b.value("intercept", c.beta_intercept);
  }
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    reject_unknown_keys(p, {"vocab_size", "feature_dim", "context_window", "embed_seed"},
                        "policy.");
    c.policy_dims.vocab_size = p.value("vocab_size", c.policy_dims.vocab_size);
    c.policy_dims.feature_dim = p.value("feature_dim", c.policy_dims.feature_dim);
    c.policy_dims.context_window = p.value("context_window", c.policy_dims.context_window);
    c.embed_seed = p.value("embed_seed", c.embed_seed);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown_keys(t, {"lr", "epochs", "batch_size", "divergence_guard"}, "train.");
    c.train.lr = t.value("lr", c.train.lr);
    c.train.epochs = t.value("epochs", c.train.epochs);
    c.train.batch_size = t.value("batch_size", c.train.batch_size);
    c.train.divergence_guard = t.value("divergence_guard", c.train.divergence_guard);
  }
  c.parallelism = j.value("parallelism", c.parallelism);
  if (j.contains("extractor")) {
    const json& e = j.at("extractor");
    reject_unknown_keys(e, {"kind"}, "extractor.");
    c.extractor_kind = e.value("kind", c.extractor_kind);
  }
  if (j.contains("responder")) {
    const json& r = j.at("responder");
    reject_unknown_keys(r, {"kind"}, "responder.");
    c.responder_kind = r.value("kind", c.responder_kind);
  }
  if (j.contains("paths")) {
    const json& p = j.at("paths");
    reject_unknown_keys(p, {"manifest", "tables", "out_dir"}, "paths.");
    c.manifest_path = p.value("manifest", c.manifest_path);
    c.tables_path = p.value("tables", c.tables_path);
    c.out_dir = p.value("out_dir", c.out_dir);
  }
  c.validate();
  return c;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

std::string serialize_run_config(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["tilt"] = to_string(c.tilt);
  j["lambdas"] = {{"y", c.lambda_y}, {"v", c.lambda_v}, {"a", c.lambda_a}};
  j["beta"] = {{"slope", c.beta_slope}, {"intercept", c.beta_intercept}};
  j["policy"] = {{"vocab_size", c.policy_dims.vocab_size},
                 {"feature_dim", c.policy_dims.feature_dim},
                 {"context_window", c.policy_dims.context_window},
                 {"embed_seed", c.embed_seed}};
  j["train"] = {{"lr", c.train.lr},
                {"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"divergence_guard", c.train.divergence_guard}};
  j["parallelism"] = c.parallelism;
  j["extractor"] = {{"kind", c.extractor_kind}};
  j["responder"] = {{"kind", c.responder_kind}};
  j["paths"] = {{"manifest", c.manifest_path},
                {"tables", c.tables_path},
                {"out_dir", c.out_dir}};
  return j.dump(2);
}

}  // namespace cavpref::cli

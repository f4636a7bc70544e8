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

#include "cavpref/preference.hpp"

#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"
#include "cavpref/math_util.hpp"

namespace cavpref {

namespace {

void check_dim(const std::vector<double>& v, std::size_t feature_dim,
               const std::string& id, const char* field) {
  if (v.size() != feature_dim) {
    throw ValidationError("record '" + id + "': field '" + field + "' has dimension " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(feature_dim));
  }
  check_finite(v, field);
}

}  // namespace

void PreferenceRecord::validate(std::size_t feature_dim) const {
  if (win_response == lose_response) {
    throw ValidationError("record '" + id + "': win_response equals lose_response");
  }
  check_dim(visual_win, feature_dim, id, "visual_win");
  check_dim(audio_win, feature_dim, id, "audio_win");

  const bool need_visual = switch_eta(task_kind) == 1;
  const bool need_audio = switch_gamma(task_kind) == 1;
  if (need_visual != visual_lose.has_value()) {
    throw ValidationError("record '" + id + "' (" + to_string(task_kind) +
                          "): visual_lose must be present iff the visual switch is on");
  }
  if (need_audio != audio_lose.has_value()) {
    throw ValidationError("record '" + id + "' (" + to_string(task_kind) +
                          "): audio_lose must be present iff the audio switch is on");
  }
  if (visual_lose) check_dim(*visual_lose, feature_dim, id, "visual_lose");
  if (audio_lose) check_dim(*audio_lose, feature_dim, id, "audio_lose");
}

void validate_batch(const std::vector<PreferenceRecord>& batch, std::size_t feature_dim) {
  if (batch.empty()) throw ValidationError("empty preference batch");
  for (const auto& rec : batch) rec.validate(feature_dim);
}

namespace {

using nlohmann::json;

json record_to_json(const PreferenceRecord& r) {
  json j;
  j["id"] = r.id;
  j["task"] = to_string(r.task_kind);
  j["category"] = r.category;
  j["question"] = r.question;
  j["win_response"] = r.win_response;
  j["lose_response"] = r.lose_response;
  j["visual_win"] = r.visual_win;
  if (r.visual_lose) j["visual_lose"] = *r.visual_lose;
  j["audio_win"] = r.audio_win;
  if (r.audio_lose) j["audio_lose"] = *r.audio_lose;
  return j;
}

PreferenceRecord record_from_json(const json& j) {
  PreferenceRecord r;
  r.id = j.at("id").get<std::string>();
  r.task_kind = task_kind_from_string(j.at("task").get<std::string>());
  r.category = j.value("category", "");
  r.question = j.at("question").get<std::vector<int>>();
  r.win_response = j.at("win_response").get<std::vector<int>>();
  r.lose_response = j.at("lose_response").get<std::vector<int>>();
  r.visual_win = j.at("visual_win").get<std::vector<double>>();
  if (j.contains("visual_lose")) r.visual_lose = j.at("visual_lose").get<std::vector<double>>();
  r.audio_win = j.at("audio_win").get<std::vector<double>>();
  if (j.contains("audio_lose")) r.audio_lose = j.at("audio_lose").get<std::vector<double>>();
  return r;
}

}  // namespace

std::vector<PreferenceRecord> read_preference_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open preference dataset '" + path + "'");
  std::vector<PreferenceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError("malformed record at " + path + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return out;
}

void write_preference_records(const std::string& path,
                              const std::vector<PreferenceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write preference dataset '" + path + "'");
  for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

}  // namespace cavpref

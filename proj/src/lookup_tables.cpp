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

#include "cavpref/lookup_tables.hpp"

#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"

namespace cavpref::bench {

void LookupTables::validate() const {
  for (const auto& [cls, unrelated_set] : t1) {
    if (unrelated_set.count(cls)) {
      throw ValidationError("t1 must be irreflexive; '" + cls + "' maps to itself");
    }
  }
  for (const auto& [super, members] : t2) {
    for (const auto& member : members) {
      const auto it = t1.find(member);
      if (it == t1.end()) continue;
      for (const auto& mate : members) {
        if (mate != member && it->second.count(mate)) {
          throw ValidationError("t2 bucket '" + super + "' member '" + mate +
                                "' appears in the t1-unrelated set of '" + member + "'");
        }
      }
    }
  }
}

void LookupTables::validate_against(std::span<const SourceSample> samples) const {
  for (const auto& s : samples) {
    if (s.question_category.empty()) continue;
    if (!t3.count(s.question_category)) {
      throw ValidationError("t3 has no entry for question category '" + s.question_category +
                            "' (sample '" + s.id + "')");
    }
  }
}

bool LookupTables::unrelated(const std::string& a, const std::string& b) const {
  const auto it = t1.find(a);
  return it != t1.end() && it->second.count(b) > 0;
}

LookupTables load_lookup_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lookup tables '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed lookup tables '" + path + "': " + e.what());
  }
  LookupTables tables;
  for (const auto& [k, v] : j.at("t1").items()) {
    tables.t1[k] = v.get<std::set<std::string>>();
  }
  for (const auto& [k, v] : j.at("t2").items()) {
    tables.t2[k] = v.get<std::set<std::string>>();
  }
  for (const auto& [k, v] : j.at("t3").items()) {
    tables.t3[k] = v.get<std::vector<std::string>>();
  }
  if (j.contains("category_prefix_rules")) {
    for (const auto& rule : j.at("category_prefix_rules")) {
      tables.category_prefix_rules.emplace_back(rule.at("prefix").get<std::string>(),
                                                rule.at("category").get<std::string>());
    }
  }
  tables.validate();
  return tables;
}

void save_lookup_tables(const std::string& path, const LookupTables& tables) {
  nlohmann::json j;
  j["t1"] = nlohmann::json::object();
  for (const auto& [k, v] : tables.t1) j["t1"][k] = v;
  j["t2"] = nlohmann::json::object();
  for (const auto& [k, v] : tables.t2) j["t2"][k] = v;
  j["t3"] = nlohmann::json::object();
  for (const auto& [k, v] : tables.t3) j["t3"][k] = v;
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [prefix, category] : tables.category_prefix_rules) {
    rules.push_back({{"prefix", prefix}, {"category", category}});
  }
  j["category_prefix_rules"] = rules;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write lookup tables '" + path + "'");
  out << j.dump(2) << "\n";
}

void assign_categories(std::vector<SourceSample>& samples, const LookupTables& tables) {
  for (auto& s : samples) {
    if (!s.question_category.empty() || !s.source_qa) continue;
    for (const auto& [prefix, category] : tables.category_prefix_rules) {
      if (s.source_qa->first.rfind(prefix, 0) == 0) {
        s.question_category = category;
        break;
      }
    }
  }
}

}  // namespace cavpref::bench

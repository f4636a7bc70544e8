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

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cavpref/manifest.hpp"

namespace cavpref::bench {

// Option-synthesis lookup tables.
//
//   t1  class -> classes unrelated to it in any way
//   t2  supercategory -> member classes
//   t3  question category -> answer pool
//
// category_prefix_rules optionally assigns a question category from a
// question prefix when a sample arrives without one.
struct LookupTables {
  std::map<std::string, std::set<std::string>> t1;
  std::map<std::string, std::set<std::string>> t2;
  std::map<std::string, std::vector<std::string>> t3;
  std::vector<std::pair<std::string, std::string>> category_prefix_rules;

  // t1 irreflexive; t2 buckets disjoint from the t1-unrelated set of each
  // member class.
  void validate() const;

  // t3 keys must cover every question category present in the manifest.
  void validate_against(std::span<const SourceSample> samples) const;

  bool unrelated(const std::string& a, const std::string& b) const;
};

LookupTables load_lookup_tables(const std::string& path);
void save_lookup_tables(const std::string& path, const LookupTables& tables);

// Applies the prefix rules when question_category is empty.
void assign_categories(std::vector<SourceSample>& samples, const LookupTables& tables);

}  // namespace cavpref::bench

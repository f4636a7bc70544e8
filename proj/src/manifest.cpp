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

#include "cavpref/manifest.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"

namespace cavpref::bench {

namespace {

using nlohmann::json;

// Embeddings are fixed-precision decimals in the manifest; rounding on write
// keeps the format stable under read/write cycles.
json embedding_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(std::round(x * 1e6) / 1e6);
  return arr;
}

json sample_to_json(const SourceSample& s) {
  json j;
  j["id"] = s.id;
  j["media_ref"] = s.media_ref;
  j["visual_embedding"] = embedding_to_json(s.visual_embedding);
  j["audio_embedding"] = embedding_to_json(s.audio_embedding);
  j["label_embedding"] = embedding_to_json(s.label_embedding);
  j["class_label"] = s.class_label;
  j["supercategory"] = s.supercategory;
  j["question_category"] = s.question_category;
  if (s.source_qa) {
    j["question"] = s.source_qa->first;
    j["answer"] = s.source_qa->second;
  }
  j["both_modalities_essential"] = s.both_modalities_essential;
  if (s.subject) j["subject"] = *s.subject;
  if (s.attribute) j["attribute"] = *s.attribute;
  return j;
}

SourceSample sample_from_json(const json& j) {
  SourceSample s;
  s.id = j.at("id").get<std::string>();
  s.media_ref = j.at("media_ref").get<std::string>();
  s.visual_embedding = j.at("visual_embedding").get<std::vector<double>>();
  s.audio_embedding = j.at("audio_embedding").get<std::vector<double>>();
  s.label_embedding = j.at("label_embedding").get<std::vector<double>>();
  s.class_label = j.at("class_label").get<std::string>();
  s.supercategory = j.value("supercategory", "");
  s.question_category = j.value("question_category", "");
  if (j.contains("question")) {
    s.source_qa = std::make_pair(j.at("question").get<std::string>(),
                                 j.value("answer", ""));
  }
  s.both_modalities_essential = j.value("both_modalities_essential", false);
  if (j.contains("subject")) s.subject = j.at("subject").get<std::string>();
  if (j.contains("attribute")) s.attribute = j.at("attribute").get<std::string>();
  if (s.class_label.empty()) throw ValidationError("sample '" + s.id + "': empty class_label");
  return s;
}

}  // namespace

std::vector<SourceSample> read_source_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest '" + path + "'");
  std::vector<SourceSample> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    SourceSample s;
    try {
      s = sample_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw ValidationError("malformed manifest line " + std::to_string(line_no) + " in '" +
                            path + "': " + e.what());
    }
    if (declared_dim == 0) declared_dim = s.visual_embedding.size();
    if (s.visual_embedding.size() != declared_dim ||
        s.audio_embedding.size() != declared_dim ||
        s.label_embedding.size() != declared_dim) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": embedding dimension differs from the manifest's declared " +
                            std::to_string(declared_dim));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_source_manifest(const std::string& path, std::span<const SourceSample> samples) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write manifest '" + path + "'");
  for (const auto& s : samples) out << sample_to_json(s).dump() << "\n";
}

std::vector<MediaSegment> swap_audio(std::vector<MediaSegment> segments) {
  if (segments.size() == 2) {
    std::swap(segments[0].audio_source, segments[1].audio_source);
  }
  return segments;
}

namespace {

json built_to_json(const BuiltItem& b) {
  json j;
  json item;
  item["id"] = b.item.id;
  item["question"] = b.item.question;
  json choices = json::array();
  for (const auto& c : b.item.choices) {
    choices.push_back({{"label", std::string(1, c.label)}, {"text", c.text}});
  }
  item["choices"] = choices;
  if (b.item.correct_label) item["correct_label"] = std::string(1, *b.item.correct_label);
  item["category"] = b.item.category;
  item["task"] = to_string(b.item.task_kind);
  item["setting"] = eval::to_string(b.item.setting);
  item["visual_ref"] = b.item.visual_ref;
  item["audio_ref"] = b.item.audio_ref;
  j["item"] = item;

  json prov;
  prov["source_ids"] = b.provenance.source_ids;
  prov["transformer"] = b.provenance.transformer;
  prov["substituted"] = b.provenance.substituted;
  json segs = json::array();
  for (const auto& s : b.provenance.segments) {
    segs.push_back({{"visual", s.visual_source}, {"audio", s.audio_source}});
  }
  prov["segments"] = segs;
  prov["setting"] = eval::to_string(b.provenance.setting);
  j["provenance"] = prov;
  return j;
}

BuiltItem built_from_json(const json& j) {
  BuiltItem b;
  const json& item = j.at("item");
  b.item.id = item.at("id").get<std::string>();
  b.item.question = item.at("question").get<std::string>();
  for (const auto& c : item.at("choices")) {
    eval::Choice ch;
    ch.label = c.at("label").get<std::string>().at(0);
    ch.text = c.at("text").get<std::string>();
    b.item.choices.push_back(std::move(ch));
  }
  if (item.contains("correct_label")) {
    b.item.correct_label = item.at("correct_label").get<std::string>().at(0);
  }
  b.item.category = item.value("category", "");
  b.item.task_kind = task_kind_from_string(item.at("task").get<std::string>());
  b.item.setting = eval::setting_from_string(item.at("setting").get<std::string>());
  b.item.visual_ref = item.value("visual_ref", "");
  b.item.audio_ref = item.value("audio_ref", "");

  const json& prov = j.at("provenance");
  b.provenance.source_ids = prov.at("source_ids").get<std::vector<std::string>>();
  b.provenance.transformer = prov.at("transformer").get<std::string>();
  b.provenance.substituted =
      prov.at("substituted").get<std::map<std::string, std::string>>();
  for (const auto& s : prov.at("segments")) {
    b.provenance.segments.push_back(
        {s.at("visual").get<std::string>(), s.at("audio").get<std::string>()});
  }
  b.provenance.setting = eval::setting_from_string(prov.at("setting").get<std::string>());
  return b;
}

}  // namespace

std::vector<BuiltItem> read_built_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open built-item file '" + path + "'");
  std::vector<BuiltItem> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(built_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError("malformed built item at " + path + ":" +
                            std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_built_items(const std::string& path, std::span<const BuiltItem> items) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write built-item file '" + path + "'");
  for (const auto& b : items) out << built_to_json(b).dump() << "\n";
}

}  // namespace cavpref::bench

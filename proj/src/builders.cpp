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

#include "cavpref/builders.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"
#include "cavpref/similarity.hpp"

namespace cavpref::bench {

namespace {

constexpr const char* kOrderQuestion = "What is the sequence of events in the video?";

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool same_text(const std::string& a, const std::string& b) { return lower(a) == lower(b); }

// Draws up to k distinct entries from a pool, seeded.
std::vector<std::string> draw(std::vector<std::string> pool, std::size_t k, Rng& rng) {
  rng.shuffle(pool);
  if (pool.size() > k) pool.resize(k);
  return pool;
}

std::vector<std::string> t3_pool(const LookupTables& tables, const std::string& category,
                                 const std::vector<std::string>& exclude) {
  std::vector<std::string> pool;
  const auto it = tables.t3.find(category);
  if (it == tables.t3.end()) return pool;
  for (const auto& entry : it->second) {
    bool skip = false;
    for (const auto& e : exclude) {
      if (same_text(entry, e)) skip = true;
    }
    if (!skip) pool.push_back(entry);
  }
  return pool;
}

// Shuffles option texts into labeled choices and resolves the key text to
// its post-shuffle label.
eval::QAItem assemble_item(std::string id, std::string question,
                           std::vector<std::string> options,
                           const std::optional<std::string>& key_text, TaskKind kind,
                           std::string category, std::string visual_ref,
                           std::string audio_ref, Rng& rng) {
  rng.shuffle(options);
  eval::QAItem item;
  item.id = std::move(id);
  item.question = std::move(question);
  for (std::size_t i = 0; i < options.size(); ++i) {
    item.choices.push_back({static_cast<char>('A' + i), options[i]});
    if (key_text && options[i] == *key_text) {
      item.correct_label = static_cast<char>('A' + i);
    }
  }
  item.category = std::move(category);
  item.task_kind = kind;
  item.setting = eval::Setting::kBase;
  item.visual_ref = std::move(visual_ref);
  item.audio_ref = std::move(audio_ref);
  item.validate();
  return item;
}

std::string pair_distractor(const SourceSample& a, const SourceSample& b,
                            const LookupTables& tables, Rng& rng, bool& ok) {
  // Prefer classes unrelated to both events.
  std::vector<std::string> pool;
  const auto ita = tables.t1.find(a.class_label);
  const auto itb = tables.t1.find(b.class_label);
  if (ita != tables.t1.end()) {
    for (const auto& cls : ita->second) {
      if (itb == tables.t1.end() || itb->second.count(cls)) pool.push_back(cls);
    }
  }
  if (pool.empty() && ita != tables.t1.end()) {
    for (const auto& cls : ita->second) {
      if (cls != b.class_label) pool.push_back(cls);
    }
  }
  if (pool.empty()) {
    ok = false;
    return {};
  }
  ok = true;
  const std::string u = pool[static_cast<std::size_t>(rng.uniform_int(pool.size()))];
  const std::string w = pool[static_cast<std::size_t>(rng.uniform_int(pool.size()))];
  return u + " is followed by " + w + ".";
}

}  // namespace

BuilderResult build_mcit(const SourceSample& sample, const LookupTables& tables, Rng& rng) {
  if (!sample.source_qa) return BuilderResult::skip("no_source_qa");
  const std::string& answer = sample.source_qa->second;

  std::vector<std::string> bucket;
  const auto it = tables.t2.find(sample.supercategory);
  if (it != tables.t2.end()) {
    for (const auto& cls : it->second) {
      if (!same_text(cls, answer)) bucket.push_back(cls);
    }
  }
  if (bucket.empty()) return BuilderResult::skip("t2_exhausted");
  const std::string replacement = draw(std::move(bucket), 1, rng)[0];

  auto fillers = draw(t3_pool(tables, sample.question_category, {answer, replacement}), 3, rng);
  if (fillers.empty()) return BuilderResult::skip("t3_exhausted");

  std::vector<std::string> options = {replacement};
  options.insert(options.end(), fillers.begin(), fillers.end());

  BuiltItem built;
  built.item = assemble_item("mcit-" + sample.id, sample.source_qa->first, std::move(options),
                             std::nullopt, TaskKind::kMcit, sample.question_category,
                             sample.media_ref, sample.media_ref, rng);
  built.provenance.source_ids = {sample.id};
  built.provenance.transformer = "mcit";
  built.provenance.substituted = {{"removed_answer", answer}, {"t2_replacement", replacement}};
  return BuilderResult::built(std::move(built));
}

BuilderResult build_icit(const SourceSample& sample, const LookupTables& tables, Rng& rng) {
  if (!sample.source_qa) return BuilderResult::skip("no_source_qa");
  const auto it = tables.t1.find(sample.class_label);
  if (it == tables.t1.end() || it->second.size() < 4) {
    return BuilderResult::skip("t1_exhausted");
  }
  std::vector<std::string> pool(it->second.begin(), it->second.end());
  auto options = draw(std::move(pool), 4, rng);

  BuiltItem built;
  built.item = assemble_item("icit-" + sample.id, sample.source_qa->first, std::move(options),
                             std::nullopt, TaskKind::kIcit, sample.question_category,
                             sample.media_ref, sample.media_ref, rng);
  built.provenance.source_ids = {sample.id};
  built.provenance.transformer = "icit";
  return BuilderResult::built(std::move(built));
}

namespace {

BuilderResult build_mismatched(const SourceSample& sample, const LookupTables& tables,
                               std::span<const SourceSample> manifest, Rng& rng,
                               bool replace_visual) {
  if (!sample.source_qa) return BuilderResult::skip("no_source_qa");

  const auto bucket = tables.t2.find(sample.supercategory);
  std::vector<const SourceSample*> donors;
  for (const auto& cand : manifest) {
    if (cand.id == sample.id) continue;
    if (!tables.unrelated(sample.class_label, cand.class_label)) continue;
    if (bucket != tables.t2.end() && bucket->second.count(cand.class_label)) continue;
    donors.push_back(&cand);
  }
  if (donors.empty()) return BuilderResult::skip("no_unrelated_donor");
  const SourceSample& donor =
      *donors[static_cast<std::size_t>(rng.uniform_int(donors.size()))];

  const std::string& answer = sample.source_qa->second;
  auto fillers = draw(t3_pool(tables, sample.question_category, {answer}), 3, rng);
  if (fillers.empty()) return BuilderResult::skip("t3_exhausted");
  std::vector<std::string> options = {answer};
  options.insert(options.end(), fillers.begin(), fillers.end());

  const TaskKind kind = replace_visual ? TaskKind::kMvit : TaskKind::kMait;
  const std::string prefix = replace_visual ? "mvit-" : "mait-";
  BuiltItem built;
  built.item = assemble_item(prefix + sample.id, sample.source_qa->first, std::move(options),
                             std::nullopt, kind, sample.question_category,
                             replace_visual ? donor.media_ref : sample.media_ref,
                             replace_visual ? sample.media_ref : donor.media_ref, rng);
  built.provenance.source_ids = {sample.id, donor.id};
  built.provenance.transformer = replace_visual ? "mvit" : "mait";
  built.provenance.substituted = {
      {replace_visual ? "visual_donor" : "audio_donor", donor.id}};
  return BuilderResult::built(std::move(built));
}

}  // namespace

BuilderResult build_mvit(const SourceSample& sample, const LookupTables& tables,
                         std::span<const SourceSample> manifest, Rng& rng) {
  return build_mismatched(sample, tables, manifest, rng, /*replace_visual=*/true);
}

BuilderResult build_mait(const SourceSample& sample, const LookupTables& tables,
                         std::span<const SourceSample> manifest, Rng& rng) {
  return build_mismatched(sample, tables, manifest, rng, /*replace_visual=*/false);
}

BuilderResult build_cot_stitch(const SourceSample& a, const SourceSample& b,
                               const LookupTables& tables, Rng& rng) {
  if (a.class_label == b.class_label) return BuilderResult::skip("same_class");
  if (!tables.unrelated(a.class_label, b.class_label) ||
      !tables.unrelated(b.class_label, a.class_label)) {
    return BuilderResult::skip("related_pair");
  }
  bool ok = false;
  const std::string unrelated = pair_distractor(a, b, tables, rng, ok);
  if (!ok) return BuilderResult::skip("no_unrelated_distractor");

  const std::string key = a.class_label + " is followed by " + b.class_label + ".";
  std::vector<std::string> options = {
      key,
      b.class_label + " is followed by " + a.class_label + ".",
      "Both of them occur at the same time.",
      unrelated,
  };

  BuiltItem built;
  built.item = assemble_item("cotstitch-" + a.id + "-" + b.id, kOrderQuestion,
                             std::move(options), key, TaskKind::kCotStitch,
                             a.question_category, "stitch:" + a.id + "+" + b.id,
                             "stitch:" + a.id + "+" + b.id, rng);
  built.provenance.source_ids = {a.id, b.id};
  built.provenance.transformer = "cot_stitch";
  built.provenance.segments = {{a.media_ref, a.media_ref}, {b.media_ref, b.media_ref}};
  return BuilderResult::built(std::move(built));
}

BuilderResult build_cot_swap(const SourceSample& a, const SourceSample& b,
                             const LookupTables& tables, Rng& rng) {
  if (a.supercategory == b.supercategory) return BuilderResult::skip("overlapping_buckets");
  bool ok = false;
  const std::string unrelated = pair_distractor(a, b, tables, rng, ok);
  if (!ok) return BuilderResult::skip("no_unrelated_distractor");

  std::vector<std::string> options = {
      a.class_label + " is followed by " + b.class_label + ".",
      b.class_label + " is followed by " + a.class_label + ".",
      "Both of them occur at the same time.",
      unrelated,
  };

  BuiltItem built;
  built.item = assemble_item("cotswap-" + a.id + "-" + b.id, kOrderQuestion,
                             std::move(options), std::nullopt, TaskKind::kCotSwap,
                             a.question_category, "stitch:" + a.id + "+" + b.id,
                             "stitch:" + b.id + "+" + a.id, rng);
  built.provenance.source_ids = {a.id, b.id};
  built.provenance.transformer = "cot_swap";
  built.provenance.segments =
      swap_audio({{a.media_ref, a.media_ref}, {b.media_ref, b.media_ref}});
  built.provenance.substituted = {{"swapped", "audio"}};
  return BuilderResult::built(std::move(built));
}

BuilderResult build_cat(const SourceSample& a, const SourceSample& b,
                        const LookupTables& tables, Rng& rng) {
  if (!a.subject || !a.attribute || !b.subject || !b.attribute) {
    return BuilderResult::skip("missing_attribute");
  }
  if (same_text(*a.attribute, *b.attribute)) {
    // The exchanged permutation would equal the key.
    return BuilderResult::skip("degenerate_attributes");
  }
  bool ok = false;
  const std::string unrelated = pair_distractor(a, b, tables, rng, ok);
  if (!ok) return BuilderResult::skip("no_unrelated_distractor");

  const std::string key =
      "A " + *a.subject + " " + *a.attribute + " and a " + *b.subject + " " + *b.attribute + ".";
  const std::string permuted =
      "A " + *a.subject + " " + *b.attribute + " and a " + *b.subject + " " + *a.attribute + ".";
  std::vector<std::string> options = {key, permuted, unrelated};

  BuiltItem built;
  built.item = assemble_item("cat-" + a.id + "-" + b.id, kOrderQuestion, std::move(options),
                             key, TaskKind::kCat, a.question_category,
                             "overlay:" + a.id + "+" + b.id, "overlay:" + a.id + "+" + b.id,
                             rng);
  built.provenance.source_ids = {a.id, b.id};
  built.provenance.transformer = "cat";
  built.provenance.substituted = {{"permuted_distractor", permuted}};
  return BuilderResult::built(std::move(built));
}

namespace {

BuilderResult build_missing(const SourceSample& sample, const LookupTables& tables, Rng& rng,
                            bool remove_visual) {
  if (!sample.both_modalities_essential) {
    return BuilderResult::skip("single_modality_answerable");
  }
  if (!sample.source_qa) return BuilderResult::skip("no_source_qa");

  const std::string& answer = sample.source_qa->second;
  auto fillers = draw(t3_pool(tables, sample.question_category, {answer}), 3, rng);
  if (fillers.empty()) return BuilderResult::skip("t3_exhausted");
  std::vector<std::string> options = {answer};
  options.insert(options.end(), fillers.begin(), fillers.end());

  const TaskKind kind = remove_visual ? TaskKind::kMvt : TaskKind::kMat;
  const std::string prefix = remove_visual ? "mvt-" : "mat-";
  BuiltItem built;
  built.item = assemble_item(prefix + sample.id, sample.source_qa->first, std::move(options),
                             std::nullopt, kind, sample.question_category,
                             remove_visual ? "" : sample.media_ref,
                             remove_visual ? sample.media_ref : "", rng);
  built.provenance.source_ids = {sample.id};
  built.provenance.transformer = remove_visual ? "mvt" : "mat";
  built.provenance.substituted = {{"removed", remove_visual ? "visual" : "audio"}};
  return BuilderResult::built(std::move(built));
}

}  // namespace

BuilderResult build_mvt(const SourceSample& sample, const LookupTables& tables, Rng& rng) {
  return build_missing(sample, tables, rng, /*remove_visual=*/true);
}

BuilderResult build_mat(const SourceSample& sample, const LookupTables& tables, Rng& rng) {
  return build_missing(sample, tables, rng, /*remove_visual=*/false);
}

AlignmentDecision alignment_filter(const SourceSample& sample) {
  AlignmentDecision d;
  if (sample.visual_embedding.empty() || sample.audio_embedding.empty() ||
      sample.label_embedding.empty()) {
    d.reason = "missing_embedding";
    return d;
  }
  const double visual_label = 0.5 * (1.0 + cosine(sample.visual_embedding, sample.label_embedding));
  const double label_audio = 0.5 * (1.0 + cosine(sample.label_embedding, sample.audio_embedding));
  d.score = visual_label * label_audio;
  d.accept = d.score >= kAlignmentThreshold;
  if (!d.accept) d.reason = "below_threshold";
  return d;
}

eval::QAItem render_setting(const eval::QAItem& item, eval::Setting setting) {
  item.validate();
  if (setting == eval::Setting::kBase) return item;

  const std::string sentence = std::string(" ") + eval::kInstructionSentence;
  const bool already =
      item.choices.back().text == eval::kNoneOfTheAboveText &&
      item.question.size() >= sentence.size() &&
      item.question.compare(item.question.size() - sentence.size(), sentence.size(),
                            sentence) == 0;
  if (already) {
    eval::QAItem out = item;
    out.setting = eval::Setting::kInstruction;
    return out;
  }

  eval::QAItem out = item;
  out.question += sentence;
  out.choices.push_back(
      {static_cast<char>('A' + out.choices.size()), eval::kNoneOfTheAboveText});
  if (!out.correct_label) out.correct_label = out.choices.back().label;
  out.setting = eval::Setting::kInstruction;
  out.validate();
  return out;
}

std::map<TaskKind, std::vector<BuiltItem>> build_all(std::span<const SourceSample> samples,
                                                     const LookupTables& tables,
                                                     const BuildOptions& options,
                                                     BuildReport& report) {
  tables.validate();
  std::vector<SourceSample> prepared(samples.begin(), samples.end());
  assign_categories(prepared, tables);
  tables.validate_against(prepared);

  std::map<TaskKind, std::vector<BuiltItem>> out;

  auto note = [&](TaskKind kind, const BuilderResult& result) {
    const std::string task = to_string(kind);
    if (result.item) {
      report.counts[task] += 1;
    } else {
      report.skips[task + ":" + result.skip_reason] += 1;
    }
  };

  auto finalize = [&](BuiltItem built) {
    if (options.setting == eval::Setting::kInstruction) {
      built.item = render_setting(built.item, eval::Setting::kInstruction);
      built.provenance.setting = eval::Setting::kInstruction;
    }
    return built;
  };

  for (TaskKind kind : options.tasks) {
    auto& items = out[kind];
    const std::uint64_t task_salt = stable_hash(to_string(kind), options.seed);
    const bool compositional = kind == TaskKind::kCotStitch || kind == TaskKind::kCotSwap ||
                               kind == TaskKind::kCat;

    if (compositional) {
      std::vector<const SourceSample*> accepted;
      for (const auto& s : prepared) {
        const AlignmentDecision d = alignment_filter(s);
        if (d.accept) {
          accepted.push_back(&s);
        } else {
          report.skips[to_string(kind) + ":alignment_" + d.reason] += 1;
        }
      }
      for (const SourceSample* a : accepted) {
        Rng rng(stable_hash(a->id, task_salt));
        std::vector<const SourceSample*> partners;
        for (const SourceSample* b : accepted) {
          if (b->id != a->id) partners.push_back(b);
        }
        if (partners.empty()) {
          report.skips[to_string(kind) + ":no_partner"] += 1;
          continue;
        }
        const SourceSample& b =
            *partners[static_cast<std::size_t>(rng.uniform_int(partners.size()))];
        BuilderResult r;
        switch (kind) {
          case TaskKind::kCotStitch: r = build_cot_stitch(*a, b, tables, rng); break;
          case TaskKind::kCotSwap: r = build_cot_swap(*a, b, tables, rng); break;
          default: r = build_cat(*a, b, tables, rng); break;
        }
        note(kind, r);
        if (r.item) items.push_back(finalize(std::move(*r.item)));
      }
      continue;
    }

    for (const auto& s : prepared) {
      Rng rng(stable_hash(s.id, task_salt));
      BuilderResult r;
      switch (kind) {
        case TaskKind::kMcit: r = build_mcit(s, tables, rng); break;
        case TaskKind::kIcit: r = build_icit(s, tables, rng); break;
        case TaskKind::kMvit: r = build_mvit(s, tables, prepared, rng); break;
        case TaskKind::kMait: r = build_mait(s, tables, prepared, rng); break;
        case TaskKind::kMvt: r = build_mvt(s, tables, rng); break;
        case TaskKind::kMat: r = build_mat(s, tables, rng); break;
        default: continue;
      }
      note(kind, r);
      if (r.item) items.push_back(finalize(std::move(*r.item)));
    }
  }
  return out;
}

std::string format_build_report(const BuildReport& report) {
  std::string out = "built items per task:\n";
  for (const auto& [task, n] : report.counts) {
    out += "  " + task + ": " + std::to_string(n) + "\n";
  }
  if (!report.skips.empty()) {
    out += "skips:\n";
    for (const auto& [key, n] : report.skips) {
      out += "  " + key + ": " + std::to_string(n) + "\n";
    }
  }
  return out;
}

void write_build_report(const std::string& path, const BuildReport& report) {
  nlohmann::json j;
  j["counts"] = report.counts;
  j["skips"] = report.skips;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write build report '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace cavpref::bench

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

#include "cavpref/circular.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "cavpref/error.hpp"

namespace cavpref::eval {

PerfectOracle::PerfectOracle(std::span<const QAItem> items) {
  for (const auto& item : items) {
    Key key;
    key.task_kind = item.task_kind;
    if (item.correct_label) {
      key.keyed = true;
      key.correct_text =
          item.choices[static_cast<std::size_t>(*item.correct_label - 'A')].text;
    }
    keys_[item.id] = std::move(key);
  }
}

std::string PerfectOracle::respond(const ResponderRequest& request) {
  const auto it = keys_.find(request.item_id);
  if (it == keys_.end()) return "I cannot answer";
  const Key& key = it->second;
  if (!key.keyed) return canonical_refusal(key.task_kind);

  // Locate the current label of the correct text in the rendered choices.
  std::size_t start = 0;
  while (start < request.rendered_choices.size()) {
    std::size_t end = request.rendered_choices.find('\n', start);
    if (end == std::string::npos) end = request.rendered_choices.size();
    const std::string line = request.rendered_choices.substr(start, end - start);
    if (line.size() >= 3 && line.substr(3) == key.correct_text) {
      return "(" + line.substr(0, 1) + ") " + key.correct_text;
    }
    start = end + 1;
  }
  return "I cannot answer";
}

QAItem rotate_item(const QAItem& item, int shift) {
  item.validate();
  QAItem out = item;
  const bool pinned = item.choices.back().text == kNoneOfTheAboveText;
  const std::size_t movable = item.choices.size() - (pinned ? 1 : 0);
  if (movable <= 1) return out;
  const std::size_t s = static_cast<std::size_t>(shift) % movable;
  if (s == 0) return out;

  for (std::size_t i = 0; i < movable; ++i) {
    out.choices[i].text = item.choices[(i + s) % movable].text;
  }
  if (item.correct_label) {
    const std::size_t c = static_cast<std::size_t>(*item.correct_label - 'A');
    if (c < movable) {
      out.correct_label = static_cast<char>('A' + (c + movable - s) % movable);
    }
  }
  return out;
}

namespace {

bool pass_is_correct(const QAItem& rotated, const std::string& response,
                     ExtractorClient* extractor, RetryPolicy retry) {
  if (rotated.correct_label) {
    const ExtractionResult er = extract_choice(response, rotated, extractor, retry);
    return er.verdict == Verdict::kMatched && er.label == *rotated.correct_label;
  }
  const auto refusal = detect_refusal(response);
  return refusal && refusal_accepted(rotated.task_kind, *refusal);
}

}  // namespace

CircularVerdict circular_eval(const QAItem& item, Responder& responder,
                              ExtractorClient* extractor, RetryPolicy retry) {
  item.validate();
  CircularVerdict verdict;
  verdict.item_id = item.id;
  const int n = static_cast<int>(item.choices.size());

  for (int pass = 0; pass < n; ++pass) {
    const QAItem rotated = rotate_item(item, pass);
    ResponderRequest req;
    req.item_id = rotated.id;
    req.question = rotated.question;
    req.rendered_choices = rotated.rendered_choices();
    req.setting = rotated.setting;
    req.visual_ref = rotated.visual_ref;
    req.audio_ref = rotated.audio_ref;

    const std::string response = responder.respond(req);
    ++verdict.passes_attempted;
    if (!pass_is_correct(rotated, response, extractor, retry)) break;
    ++verdict.passes_correct;
  }
  verdict.solved = verdict.passes_correct == n;
  return verdict;
}

std::vector<CircularVerdict> evaluate_items(std::span<const QAItem> items,
                                            Responder& responder,
                                            ExtractorClient* extractor, int parallelism,
                                            RetryPolicy retry) {
  if (parallelism < 1) throw ValidationError("evaluate_items: parallelism must be >= 1");
  std::vector<CircularVerdict> verdicts(items.size());
  if (items.empty()) return verdicts;

  if (parallelism == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      verdicts[i] = circular_eval(items[i], responder, extractor, retry);
    }
    return verdicts;
  }

  // Clients are not assumed thread-safe; calls go through a serializing
  // gate. The N passes of one item stay strictly sequential inside
  // circular_eval.
  std::mutex gate;
  class GatedResponder : public Responder {
   public:
    GatedResponder(Responder& inner, std::mutex& m) : inner_(inner), m_(m) {}
    std::string respond(const ResponderRequest& r) override {
      std::scoped_lock lock(m_);
      return inner_.respond(r);
    }

   private:
    Responder& inner_;
    std::mutex& m_;
  };
  class GatedExtractor : public ExtractorClient {
   public:
    GatedExtractor(ExtractorClient& inner, std::mutex& m) : inner_(inner), m_(m) {}
    std::string extract(const std::string& q, const std::vector<Choice>& c,
                        const std::string& r) override {
      std::scoped_lock lock(m_);
      return inner_.extract(q, c, r);
    }

   private:
    ExtractorClient& inner_;
    std::mutex& m_;
  };

  GatedResponder gated_responder(responder, gate);
  std::unique_ptr<GatedExtractor> gated_extractor_impl;
  ExtractorClient* gated_extractor = nullptr;
  if (extractor) {
    gated_extractor_impl = std::make_unique<GatedExtractor>(*extractor, gate);
    gated_extractor = gated_extractor_impl.get();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      verdicts[i] = circular_eval(items[i], gated_responder, gated_extractor, retry);
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min<int>(parallelism, static_cast<int>(items.size()));
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return verdicts;
}

std::string to_string(AccuracyMode m) {
  return m == AccuracyMode::kCircular ? "circular" : "vanilla";
}

AccuracyMode accuracy_mode_from_string(const std::string& name) {
  if (name == "circular") return AccuracyMode::kCircular;
  if (name == "vanilla") return AccuracyMode::kVanilla;
  throw ValidationError("unknown mode '" + name + "' (expected circular|vanilla)");
}

AccuracyReport aggregate_accuracy(std::span<const CircularVerdict> verdicts,
                                  std::span<const QAItem> items, AccuracyMode mode) {
  std::map<std::string, const QAItem*> by_id;
  for (const auto& item : items) by_id[item.id] = &item;

  AccuracyReport report;
  report.mode = mode;

  struct Bucket {
    int n = 0;
    int solved = 0;
    int first_pass = 0;
  };
  std::map<std::pair<std::string, std::string>, Bucket> buckets;
  bool warned_uncategorized = false;

  for (const auto& v : verdicts) {
    const auto it = by_id.find(v.item_id);
    if (it == by_id.end()) {
      throw ValidationError("verdict for unknown item '" + v.item_id + "'");
    }
    const QAItem& item = *it->second;
    std::string category = item.category;
    if (category.empty()) {
      category = "uncategorized";
      if (!warned_uncategorized) {
        report.warnings.push_back("items without a category were bucketed as 'uncategorized'");
        warned_uncategorized = true;
      }
    }
    Bucket& b = buckets[{to_string(item.task_kind), category}];
    b.n += 1;
    b.solved += v.solved ? 1 : 0;
    b.first_pass += v.passes_correct >= 1 ? 1 : 0;
  }

  for (const auto& [key, b] : buckets) {
    AccuracyRow row;
    row.task = key.first;
    row.category = key.second;
    row.n = b.n;
    row.circular_acc = b.n ? static_cast<double>(b.solved) / b.n : 0.0;
    row.vanilla_acc = b.n ? static_cast<double>(b.first_pass) / b.n : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_report_table(const AccuracyReport& report) {
  std::string out;
  if (!report.deterministic) {
    out += "note: produced by a live client; results are not deterministic\n";
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s %-16s %6s %14s %14s\n", "task", "category", "n",
                "circular_acc", "vanilla_acc");
  out += buf;
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-16s %6d %14.4f %14.4f\n", row.task.c_str(),
                  row.category.c_str(), row.n, row.circular_acc, row.vanilla_acc);
    out += buf;
  }
  for (const auto& w : report.warnings) {
    out += "warning: " + w + "\n";
  }
  return out;
}

void write_report_jsonl(const std::string& path, const AccuracyReport& report) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write report '" + path + "'");
  {
    nlohmann::json header;
    header["type"] = "eval_report";
    header["mode"] = to_string(report.mode);
    header["deterministic"] = report.deterministic;
    out << header.dump() << "\n";
  }
  for (const auto& row : report.rows) {
    nlohmann::json j;
    j["task"] = row.task;
    j["category"] = row.category;
    j["n"] = row.n;
    j["circular_acc"] = row.circular_acc;
    j["vanilla_acc"] = row.vanilla_acc;
    out << j.dump() << "\n";
  }
}

namespace {

using nlohmann::json;

json item_to_json(const QAItem& item) {
  json j;
  j["id"] = item.id;
  j["question"] = item.question;
  json choices = json::array();
  for (const auto& c : item.choices) {
    choices.push_back({{"label", std::string(1, c.label)}, {"text", c.text}});
  }
  j["choices"] = choices;
  if (item.correct_label) j["correct_label"] = std::string(1, *item.correct_label);
  j["category"] = item.category;
  j["task"] = cavpref::to_string(item.task_kind);
  j["setting"] = to_string(item.setting);
  j["visual_ref"] = item.visual_ref;
  j["audio_ref"] = item.audio_ref;
  return j;
}

QAItem item_from_json(const json& j) {
  QAItem item;
  item.id = j.at("id").get<std::string>();
  item.question = j.at("question").get<std::string>();
  for (const auto& c : j.at("choices")) {
    Choice ch;
    ch.label = c.at("label").get<std::string>().at(0);
    ch.text = c.at("text").get<std::string>();
    item.choices.push_back(std::move(ch));
  }
  if (j.contains("correct_label")) {
    item.correct_label = j.at("correct_label").get<std::string>().at(0);
  }
  item.category = j.value("category", "");
  item.task_kind = task_kind_from_string(j.at("task").get<std::string>());
  item.setting = setting_from_string(j.at("setting").get<std::string>());
  item.visual_ref = j.value("visual_ref", "");
  item.audio_ref = j.value("audio_ref", "");
  item.validate();
  return item;
}

}  // namespace

std::vector<QAItem> read_qa_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open item file '" + path + "'");
  std::vector<QAItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      items.push_back(item_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError("malformed item at " + path + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return items;
}

void write_qa_items(const std::string& path, std::span<const QAItem> items) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write item file '" + path + "'");
  for (const auto& item : items) out << item_to_json(item).dump() << "\n";
}

}  // namespace cavpref::eval

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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cavpref/extraction.hpp"
#include "cavpref/qa_item.hpp"

namespace cavpref::eval {

struct ResponderRequest {
  std::string item_id;
  std::string question;
  std::string rendered_choices;
  Setting setting = Setting::kBase;
  std::string visual_ref;
  std::string audio_ref;
};

// The model under test.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual std::string respond(const ResponderRequest& request) = 0;
};

class ConstantResponder : public Responder {
 public:
  explicit ConstantResponder(std::string reply) : reply_(std::move(reply)) {}
  std::string respond(const ResponderRequest&) override { return reply_; }

 private:
  std::string reply_;
};

// Answers every pass correctly: keyed items by locating the stored correct
// text among the (possibly rotated) rendered choices, keyless items with the
// canonical refusal for their task kind.
class PerfectOracle : public Responder {
 public:
  explicit PerfectOracle(std::span<const QAItem> items);
  std::string respond(const ResponderRequest& request) override;

 private:
  struct Key {
    bool keyed = false;
    std::string correct_text;
    TaskKind task_kind = TaskKind::kMcit;
  };
  std::map<std::string, Key> keys_;
};

// Wraps an arbitrary function; handy for scripted fixtures.
class FunctionResponder : public Responder {
 public:
  explicit FunctionResponder(std::function<std::string(const ResponderRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string respond(const ResponderRequest& request) override { return fn_(request); }

 private:
  std::function<std::string(const ResponderRequest&)> fn_;
};

struct CircularVerdict {
  std::string item_id;
  int passes_attempted = 0;
  int passes_correct = 0;
  bool solved = false;
};

// Cyclic rotation of the choice texts by `shift` positions; labels stay
// fixed and the tracked correct label follows its text. A final
// "None of the above" choice is pinned in place and does not rotate.
QAItem rotate_item(const QAItem& item, int shift);

// Runs up to N passes (N = number of choices), one per rotation, stopping at
// the first incorrect pass. Keyed items compare the extracted label against
// the rotated correct label (an extraction error counts as incorrect);
// keyless items accept any refusal variant valid for the task kind.
CircularVerdict circular_eval(const QAItem& item, Responder& responder,
                              ExtractorClient* extractor, RetryPolicy retry = {});

// Evaluates a set of items with at most `parallelism` concurrent items; the
// responder and extractor are serialized behind a gate, and results are
// ordered by input position regardless of completion order.
std::vector<CircularVerdict> evaluate_items(std::span<const QAItem> items,
                                            Responder& responder,
                                            ExtractorClient* extractor,
                                            int parallelism = 1,
                                            RetryPolicy retry = {});

enum class AccuracyMode { kCircular, kVanilla };

std::string to_string(AccuracyMode m);
AccuracyMode accuracy_mode_from_string(const std::string& name);

struct AccuracyRow {
  std::string task;
  std::string category;
  int n = 0;
  double circular_acc = 0.0;
  double vanilla_acc = 0.0;
};

struct AccuracyReport {
  AccuracyMode mode = AccuracyMode::kCircular;
  bool deterministic = true;  // false for live-client runs
  std::vector<AccuracyRow> rows;
  std::vector<std::string> warnings;
};

// Groups verdicts by (task kind, category). Circular accuracy is the solved
// fraction; vanilla accuracy reuses pass 1 of the circular runs. Items with
// an empty category land in "uncategorized" with a warning.
AccuracyReport aggregate_accuracy(std::span<const CircularVerdict> verdicts,
                                  std::span<const QAItem> items, AccuracyMode mode);

std::string format_report_table(const AccuracyReport& report);
void write_report_jsonl(const std::string& path, const AccuracyReport& report);

// HTTP-backed clients. Endpoint and bearer token come from the environment:
// CAVPREF_RESPONDER_URL / CAVPREF_RESPONDER_TOKEN and
// CAVPREF_EXTRACTOR_URL / CAVPREF_EXTRACTOR_TOKEN. Evaluation runs through
// these clients are not deterministic and the reports say so.
class HttpResponder : public Responder {
 public:
  HttpResponder();  // reads the environment; throws if the URL is unset
  explicit HttpResponder(std::string url, std::string token);
  std::string respond(const ResponderRequest& request) override;

 private:
  std::string url_;
  std::string token_;
};

class HttpExtractor : public ExtractorClient {
 public:
  HttpExtractor();
  explicit HttpExtractor(std::string url, std::string token);
  std::string extract(const std::string& question, const std::vector<Choice>& choices,
                      const std::string& response) override;

 private:
  std::string url_;
  std::string token_;
};

// JSONL round trip for QA item sets.
std::vector<QAItem> read_qa_items(const std::string& path);
void write_qa_items(const std::string& path, std::span<const QAItem> items);

}  // namespace cavpref::eval

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

#include <string>
#include <vector>

#include "cavpref/qa_item.hpp"

namespace cavpref::eval {

enum class Verdict { kMatched, kNoMatch, kNeedsStage2, kError };
enum class Stage { kHeuristic, kFallback };

struct ExtractionResult {
  Verdict verdict = Verdict::kNeedsStage2;
  char label = '\0';  // valid only when verdict == kMatched
  Stage stage = Stage::kHeuristic;
  std::string raw_response;
  std::string note;
};

// Stage 1: rule-based label extraction. Accepts a bare letter, the
// "A)", "A.", "A,", "(A)" forms at the start of the response, a
// parenthesized letter elsewhere, or a verbatim (case-insensitive) match of
// exactly one choice text — provided no other choice's text or label is
// embedded in the trailing span. A start-anchored label outranks a
// parenthesized one elsewhere. Anything ambiguous (several labels, a
// clarification request, no recognizable form) yields kNeedsStage2; stage 1
// never returns kNoMatch. Total: every string yields a verdict.
ExtractionResult heuristic_match(const std::string& response, const QAItem& item);

// Maps (question, choices, free-form response) to a single uppercase letter
// or the literal string "No match found".
class ExtractorClient {
 public:
  virtual ~ExtractorClient() = default;
  virtual std::string extract(const std::string& question,
                              const std::vector<Choice>& choices,
                              const std::string& response) = 0;
};

// Deterministic stand-in for the hosted extractor: stopword-filtered word
// overlap between the response and each choice text; unique best overlap
// wins, otherwise "No match found".
class LexicalExtractor : public ExtractorClient {
 public:
  std::string extract(const std::string& question, const std::vector<Choice>& choices,
                      const std::string& response) override;
};

class ConstantExtractor : public ExtractorClient {
 public:
  explicit ConstantExtractor(std::string output) : output_(std::move(output)) {}
  std::string extract(const std::string&, const std::vector<Choice>&,
                      const std::string&) override {
    return output_;
  }

 private:
  std::string output_;
};

struct RetryPolicy {
  int attempts = 3;
};

// Stage 2. Renders the extraction prompt, queries the client, and parses
// the reply: a single in-range uppercase letter -> kMatched, the literal
// "No match found" -> kNoMatch, anything else -> kNoMatch with a diagnostic
// note. Transport failures are retried per policy and then reported as
// kError, distinct from kNoMatch.
ExtractionResult fallback_extract(const std::string& response, const QAItem& item,
                                  ExtractorClient& extractor, RetryPolicy retry = {});

// The full two-stage pipeline; the fallback runs only when stage 1 returns
// kNeedsStage2 (and an extractor is available).
ExtractionResult extract_choice(const std::string& response, const QAItem& item,
                                ExtractorClient* extractor, RetryPolicy retry = {});

// The few-shot prompt the hosted extractor receives.
std::string render_extractor_prompt(const std::string& question,
                                    const std::vector<Choice>& choices,
                                    const std::string& response);

}  // namespace cavpref::eval

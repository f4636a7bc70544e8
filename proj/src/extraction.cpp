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

#include "cavpref/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "cavpref/error.hpp"

namespace cavpref::eval {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Case-insensitive, word-bounded containment.
bool contains_word_ci(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return false;
  const std::string h = lower(haystack);
  const std::string n = lower(needle);
  std::size_t pos = h.find(n);
  while (pos != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(h[pos - 1]);
    const std::size_t end = pos + n.size();
    const bool right_ok = end == h.size() || !is_word_char(h[end]);
    if (left_ok && right_ok) return true;
    pos = h.find(n, pos + 1);
  }
  return false;
}

struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_word_char(s[i])) {
      ++i;
      continue;
    }
    Token t;
    t.begin = i;
    while (i < s.size() && is_word_char(s[i])) ++i;
    t.end = i;
    t.text = s.substr(t.begin, t.end - t.begin);
    out.push_back(std::move(t));
  }
  return out;
}

bool is_connective(const std::string& w) {
  const std::string l = lower(w);
  return l == "or" || l == "and" || l == "option" || l == "choice" || l == "answer";
}

// Scans a span for label-like mentions of letters other than `exclude`.
// A single uppercase letter within range counts; for 'A' (which doubles as
// the article) only when it is followed by punctuation/end or sits next to
// a connective word.
bool has_other_label_mention(const std::string& span, char max_label, char exclude) {
  const auto tokens = tokenize(span);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.text.size() != 1) continue;
    const char c = t.text[0];
    if (c < 'A' || c > max_label) continue;
    if (c == exclude) continue;
    if (c == 'A') {
      std::size_t j = t.end;
      while (j < span.size() && span[j] == ' ') ++j;
      const bool followed_by_punct = j >= span.size() || !is_word_char(span[j]);
      const bool near_connective = (i > 0 && is_connective(tokens[i - 1].text)) ||
                                   (i + 1 < tokens.size() && is_connective(tokens[i + 1].text));
      if (!followed_by_punct && !near_connective) continue;
    }
    return true;
  }
  return false;
}

// Does the span embed the text of a choice other than `matched`? A choice's
// own text is allowed to appear after its label.
bool has_other_choice_text(const std::string& span, const QAItem& item, char matched) {
  for (const auto& c : item.choices) {
    if (c.label == matched) continue;
    if (contains_word_ci(span, c.text)) return true;
  }
  return false;
}

bool is_clarification_request(const std::string& response) {
  static const char* kMarkers[] = {"clarify", "clarification", "rephrase"};
  for (const char* m : kMarkers) {
    if (contains_word_ci(response, m)) return true;
  }
  return false;
}

char to_upper_letter(char c) {
  return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

ExtractionResult stage2_demotion(const std::string& response, std::string note) {
  ExtractionResult r;
  r.verdict = Verdict::kNeedsStage2;
  r.stage = Stage::kHeuristic;
  r.raw_response = response;
  r.note = std::move(note);
  return r;
}

}  // namespace

ExtractionResult heuristic_match(const std::string& response, const QAItem& item) {
  item.validate();
  const char max_label = static_cast<char>('A' + item.choices.size() - 1);
  const std::string trimmed = trim(response);

  if (is_clarification_request(trimmed)) {
    return stage2_demotion(response, "clarification request");
  }

  auto matched = [&](char label, std::string note = {}) {
    ExtractionResult r;
    r.verdict = Verdict::kMatched;
    r.label = label;
    r.stage = Stage::kHeuristic;
    r.raw_response = response;
    r.note = std::move(note);
    return r;
  };

  auto accept_with_trailing = [&](char label, const std::string& trailing)
      -> ExtractionResult {
    if (has_other_choice_text(trailing, item, label)) {
      return stage2_demotion(response, "another choice text in trailing span");
    }
    if (has_other_label_mention(trailing, max_label, label)) {
      return stage2_demotion(response, "several option labels mentioned");
    }
    return matched(label);
  };

  // Bare letter: the whole response is one label.
  if (trimmed.size() == 1) {
    const char c = to_upper_letter(trimmed[0]);
    if (c >= 'A' && c <= max_label && std::isalpha(static_cast<unsigned char>(trimmed[0]))) {
      return matched(c);
    }
  }

  // Start-anchored "X)", "X.", "X,", "X:" and "(X)".
  if (trimmed.size() >= 2) {
    const char c = to_upper_letter(trimmed[0]);
    const char p = trimmed[1];
    if (std::isalpha(static_cast<unsigned char>(trimmed[0])) && c >= 'A' && c <= max_label &&
        (p == ')' || p == '.' || p == ',' || p == ':')) {
      return accept_with_trailing(c, trimmed.substr(2));
    }
    if (trimmed[0] == '(' && trimmed.size() >= 3 && trimmed[2] == ')') {
      const char pc = to_upper_letter(trimmed[1]);
      if (std::isalpha(static_cast<unsigned char>(trimmed[1])) && pc >= 'A' && pc <= max_label) {
        return accept_with_trailing(pc, trimmed.substr(3));
      }
    }
  }

  // Parenthesized label anywhere.
  {
    std::set<char> seen;
    std::size_t last_end = 0;
    for (std::size_t i = 0; i + 2 < trimmed.size(); ++i) {
      if (trimmed[i] != '(' || trimmed[i + 2] != ')') continue;
      const char c = to_upper_letter(trimmed[i + 1]);
      if (std::isalpha(static_cast<unsigned char>(trimmed[i + 1])) && c >= 'A' &&
          c <= max_label) {
        seen.insert(c);
        last_end = i + 3;
      }
    }
    if (seen.size() > 1) {
      return stage2_demotion(response, "several parenthesized labels");
    }
    if (seen.size() == 1) {
      return accept_with_trailing(*seen.begin(), trimmed.substr(last_end));
    }
  }

  // Verbatim choice text (case-insensitive, terminal punctuation ignored).
  {
    std::string flat = trimmed;
    while (!flat.empty() && (flat.back() == '.' || flat.back() == '!')) flat.pop_back();
    flat = lower(trim(flat));
    char found = '\0';
    int hits = 0;
    for (const auto& c : item.choices) {
      if (lower(c.text) == flat) {
        found = c.label;
        ++hits;
      }
    }
    if (hits == 1) return matched(found, "verbatim choice text");
    if (hits > 1) return stage2_demotion(response, "duplicate choice texts");
  }

  return stage2_demotion(response, "no recognizable label form");
}

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kStop = {
      "a",  "an", "the", "is",  "are", "was", "were", "of",   "on",  "in",   "at",
      "to", "and", "or",  "it",  "this", "that", "with", "for", "by",   "from",
      "as", "be", "been", "being", "its", "his", "her", "their"};
  return kStop;
}

std::vector<std::string> content_words(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(lower(s))) {
    if (stopwords().count(t.text)) continue;
    out.push_back(t.text);
  }
  return out;
}

}  // namespace

std::string LexicalExtractor::extract(const std::string& /*question*/,
                                      const std::vector<Choice>& choices,
                                      const std::string& response) {
  const auto resp_words = content_words(response);
  std::set<std::string> resp_set(resp_words.begin(), resp_words.end());

  int best = 0;
  char best_label = '\0';
  bool unique = true;
  for (const auto& c : choices) {
    int score = 0;
    std::set<std::string> seen;
    for (const auto& w : content_words(c.text)) {
      if (resp_set.count(w) && seen.insert(w).second) ++score;
    }
    if (score > best) {
      best = score;
      best_label = c.label;
      unique = true;
    } else if (score == best && score > 0) {
      unique = false;
    }
  }
  if (best > 0 && unique) return std::string(1, best_label);
  return "No match found";
}

std::string render_extractor_prompt(const std::string& question,
                                    const std::vector<Choice>& choices,
                                    const std::string& response) {
  std::string options;
  for (const auto& c : choices) {
    if (!options.empty()) options += ' ';
    options += c.label;
    options += ". ";
    options += c.text;
  }
  std::string p;
  p += "Can you help me match an answer with a set of options for a single correct "
       "answer type question? I will provide you with a question, a set of options, and "
       "a response from an agent. You are required to map the agent's response to the "
       "most similar option from the set. You should respond with a single uppercase "
       "character in 'A', 'B', 'C', 'D', and 'E' depending on the choice you feel is "
       "the most appropriate match. If there are no similar options you might output "
       "'No match found'. Please refrain from being subjective while matching and do "
       "not use any external knowledge. Below are some examples:\n";
  p += "Example 1:\n"
       "Question: What color is the man's shirt who is sitting left of the object "
       "making this sound?\n"
       "Options: A. Green B. Red C. Yellow D. Black\n"
       "Answer: The person sitting next to the record player is wearing a black color "
       "shirt\n"
       "Your output: D\n";
  p += "Example 2:\n"
       "Question: What does the audio-visual event constitute?\n"
       "Options: A. A dog barking at a cat B. A dog barking on being hit by a stick "
       "C. The dog is hungry D. The dog is chasing another dog\n"
       "Answer: It is a wolf\n"
       "Your output: No match found\n";
  p += "Question: " + question + "\n";
  p += "Options: " + options + "\n";
  p += "Answer: " + response + "\n";
  p += "Your output:";
  return p;
}

ExtractionResult fallback_extract(const std::string& response, const QAItem& item,
                                  ExtractorClient& extractor, RetryPolicy retry) {
  item.validate();
  ExtractionResult r;
  r.stage = Stage::kFallback;
  r.raw_response = response;

  std::string raw;
  bool ok = false;
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, retry.attempts); ++attempt) {
    try {
      raw = extractor.extract(item.question, item.choices, response);
      ok = true;
      break;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  if (!ok) {
    r.verdict = Verdict::kError;
    r.note = "extractor transport failure: " + last_error;
    return r;
  }

  const std::string out = trim(raw);
  if (lower(out) == "no match found") {
    r.verdict = Verdict::kNoMatch;
    return r;
  }
  std::string letter = out;
  while (!letter.empty() && (letter.back() == '.' || letter.back() == ')')) letter.pop_back();
  const char max_label = static_cast<char>('A' + item.choices.size() - 1);
  if (letter.size() == 1 && letter[0] >= 'A' && letter[0] <= max_label) {
    r.verdict = Verdict::kMatched;
    r.label = letter[0];
    return r;
  }
  r.verdict = Verdict::kNoMatch;
  r.note = "malformed extractor output: '" + raw + "'";
  return r;
}

ExtractionResult extract_choice(const std::string& response, const QAItem& item,
                                ExtractorClient* extractor, RetryPolicy retry) {
  ExtractionResult r = heuristic_match(response, item);
  if (r.verdict != Verdict::kNeedsStage2 || extractor == nullptr) return r;
  return fallback_extract(response, item, *extractor, retry);
}

}  // namespace cavpref::eval

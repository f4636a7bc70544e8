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

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "cavpref/circular.hpp"
#include "cavpref/error.hpp"

namespace cavpref::eval {

namespace {

using nlohmann::json;

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

std::string require_env(const char* name) {
  const std::string v = env_or_empty(name);
  if (v.empty()) {
    throw ValidationError(std::string("environment variable ") + name + " is not set");
  }
  return v;
}

// Splits "http://host:port/path" into (host:port, path) for httplib.
std::pair<std::string, std::string> split_url(const std::string& url) {
  std::string rest = url;
  const auto scheme = rest.find("://");
  std::string base = "http://";
  if (scheme != std::string::npos) {
    base = rest.substr(0, scheme + 3);
    rest = rest.substr(scheme + 3);
  }
  const auto slash = rest.find('/');
  if (slash == std::string::npos) return {base + rest, "/"};
  return {base + rest.substr(0, slash), rest.substr(slash)};
}

std::string post_json(const std::string& url, const std::string& token, const json& body) {
  const auto [host, path] = split_url(url);
  httplib::Client client(host);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  const auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("POST " + url + " returned status " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace

HttpResponder::HttpResponder()
    : url_(require_env("CAVPREF_RESPONDER_URL")),
      token_(env_or_empty("CAVPREF_RESPONDER_TOKEN")) {}

HttpResponder::HttpResponder(std::string url, std::string token)
    : url_(std::move(url)), token_(std::move(token)) {}

std::string HttpResponder::respond(const ResponderRequest& request) {
  json body;
  body["item_id"] = request.item_id;
  body["question"] = request.question;
  body["choices"] = request.rendered_choices;
  body["setting"] = to_string(request.setting);
  body["visual_ref"] = request.visual_ref;
  body["audio_ref"] = request.audio_ref;
  const std::string reply = post_json(url_, token_, body);
  try {
    return json::parse(reply).at("response").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("responder returned malformed JSON: ") + e.what());
  }
}

HttpExtractor::HttpExtractor()
    : url_(require_env("CAVPREF_EXTRACTOR_URL")),
      token_(env_or_empty("CAVPREF_EXTRACTOR_TOKEN")) {}

HttpExtractor::HttpExtractor(std::string url, std::string token)
    : url_(std::move(url)), token_(std::move(token)) {}

std::string HttpExtractor::extract(const std::string& question,
                                   const std::vector<Choice>& choices,
                                   const std::string& response) {
  json body;
  body["prompt"] = render_extractor_prompt(question, choices, response);
  const std::string reply = post_json(url_, token_, body);
  try {
    return json::parse(reply).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("extractor returned malformed JSON: ") + e.what());
  }
}

}  // namespace cavpref::eval

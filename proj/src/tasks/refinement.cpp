/*
 * Copyright 2026 The Navbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tasks/refinement.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include <httplib.h>

#include "common/error.hpp"

namespace navbench {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool has_phrase(const std::string& text, const std::string& phrase) {
  std::size_t pos = 0;
  while ((pos = text.find(phrase, pos)) != std::string::npos) {
    const std::size_t end = pos + phrase.size();
    const bool l = pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
    const bool r = end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
    if (l && r) return true;
    pos = end;
  }
  return false;
}

class HttpRefinementClient : public RefinementClient {
 public:
  explicit HttpRefinementClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {
    const auto scheme = cfg_.endpoint.find("://");
    const auto rest = scheme == std::string::npos ? 0 : scheme + 3;
    const auto slash = cfg_.endpoint.find('/', rest);
    base_ = cfg_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : cfg_.endpoint.substr(slash);
  }

  std::string complete(const RefinementRequest& req) override {
    httplib::Client cli(base_);
    const auto secs = static_cast<time_t>(cfg_.timeout_s);
    const auto usecs = static_cast<time_t>((cfg_.timeout_s - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!cfg_.token.empty()) headers.emplace("Authorization", "Bearer " + cfg_.token);
    const Json body{{"role", std::string(refinement_role_name(req.role))}, {"prompt", req.prompt}, {"context", req.context}};
    auto res = cli.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw Error(ErrorCode::kClientTimeout, "refinement request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw Error(ErrorCode::kSchemaInvalid, "refinement endpoint answered HTTP " + std::to_string(res->status));
    }
    Json reply;
    try {
      reply = Json::parse(res->body);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kSchemaInvalid, "refinement reply is not JSON");
    }
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
      throw Error(ErrorCode::kSchemaInvalid, "refinement reply lacks a string 'text'");
    }
    return reply["text"].get<std::string>();
  }

 private:
  HttpClientConfig cfg_;
  std::string base_;
  std::string path_;
};

std::string describer_prompt(const RefinementContext& ctx) {
  std::string seen;
  for (const auto& l : ctx.seen_along_path) seen += (seen.empty() ? "" : ", ") + l;
  return "You are looking at what a robot saw on its way to a goal: " + (seen.empty() ? std::string("nothing") : seen) +
         ". In one sentence, say where the " + ctx.prior.target_label +
         " is relative to a nearby object. If you cannot tell, say that the target object is not clearly visible.";
}

std::string verifier_prompt(const std::string& caption, const TargetRelation& prior) {
  return "A map says the " + prior.target_label + " is " + (prior.phrase.empty() ? "in" : prior.phrase) + " the " +
         (prior.phrase.empty() ? prior.room_label : prior.reference_label) + ". A viewer wrote: \"" + caption +
         "\". Reply with JSON {\"relation\": <phrase>} giving the relation to keep.";
}

std::string synthesizer_prompt(const TargetRelation& rel) {
  return "Write three short navigation requests asking someone to find the " + rel.target_label +
         (rel.phrase.empty() ? "" : " " + rel.phrase + " the " + rel.reference_label) + " in the " + rel.room_label +
         ": one formal, one polite and conversational, one clipped. Answer with a JSON object holding exactly the "
         "keys formal, natural and casual.";
}

}  // namespace

std::string_view refinement_role_name(RefinementRole r) {
  switch (r) {
    case RefinementRole::kDescriber: return "describer";
    case RefinementRole::kVerifier: return "verifier";
    case RefinementRole::kSynthesizer: return "synthesizer";
  }
  return "describer";
}

std::shared_ptr<RefinementClient> make_http_client(const HttpClientConfig& config) {
  if (config.endpoint.rfind("http://", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "refinement endpoint must be an http:// URL");
  }
  return std::make_shared<HttpRefinementClient>(config);
}

RefinementClients clients_from_environment() {
  const char* endpoint = std::getenv("REFINEMENT_ENDPOINT");
  if (!endpoint || !*endpoint) return {};
  const char* token = std::getenv("REFINEMENT_TOKEN");
  auto client = make_http_client({endpoint, token ? token : "", 10.0});
  return {client, client, client};
}

std::string fuse_relation(const std::string& caption, const TargetRelation& prior) {
  const std::string text = lower(caption);
  static const char* kUninformative[] = {"not clearly visible", "not visible", "cannot tell", "can't tell",
                                         "unclear", "no object"};
  for (const char* u : kUninformative) {
    if (text.find(u) != std::string::npos) return prior.phrase;
  }
  if (prior.reference_label.empty()) return prior.phrase;
  if (!has_phrase(text, lower(prior.target_label)) || !has_phrase(text, lower(prior.reference_label))) {
    return prior.phrase;
  }
  // Longest phrase wins so "in front of" beats "in".
  std::string best;
  for (const auto& p : relation_phrases()) {
    if (p.size() > best.size() && has_phrase(text, p)) best = p;
  }
  return best.empty() ? prior.phrase : best;
}

CoarseInstructions parse_synthesizer_reply(const std::string& text, const std::string& target_label) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchemaInvalid, "synthesizer reply is not a JSON object");
  }
  if (!j.is_object() || j.size() != 3) throw Error(ErrorCode::kSchemaInvalid, "synthesizer reply needs exactly three keys");
  CoarseInstructions out;
  for (const char* key : {"formal", "natural", "casual"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::kSchemaInvalid, std::string("synthesizer reply missing string '") + key + "'");
    }
    const std::string v = j[key].get<std::string>();
    if (v.empty() || !has_phrase(lower(v), lower(target_label))) {
      throw Error(ErrorCode::kSchemaInvalid, std::string("synthesizer '") + key + "' does not name the target");
    }
    (key[0] == 'f' ? out.formal : key[0] == 'n' ? out.natural : out.casual) = v;
  }
  if (out.formal == out.natural || out.natural == out.casual || out.formal == out.casual) {
    throw Error(ErrorCode::kSchemaInvalid, "synthesizer styles must differ");
  }
  return out;
}

RefinementResult refine(const InstructionBundle& bundle, const RefinementContext& context,
                        const RefinementClients& clients) {
  RefinementResult result{bundle, {}};
  if (clients.empty() || !bundle.coarse) return result;

  auto call = [&](const std::shared_ptr<RefinementClient>& client, RefinementRole role, const std::string& prompt,
                  Json ctx) -> std::optional<std::string> {
    if (!client) return std::nullopt;
    try {
      return client->complete({role, prompt, std::move(ctx)});
    } catch (const Error& e) {
      result.log.push_back(std::string(refinement_role_name(role)) + ": " + std::string(error_code_name(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      result.log.push_back(std::string(refinement_role_name(role)) + ": client_error: " + e.what());
    }
    return std::nullopt;
  };

  TargetRelation rel = context.prior;
  const Json seen = context.seen_along_path;
  if (auto caption = call(clients.describer, RefinementRole::kDescriber, describer_prompt(context), {{"seen", seen}})) {
    std::string phrase = fuse_relation(*caption, context.prior);
    if (phrase != context.prior.phrase) {
      // A configured Verifier may veto the caption; its reply must name a
      // known phrase, anything else keeps the prior.
      if (clients.verifier) {
        auto verdict = call(clients.verifier, RefinementRole::kVerifier, verifier_prompt(*caption, context.prior),
                            {{"caption", *caption}, {"prior", context.prior.phrase}});
        std::string chosen = context.prior.phrase;
        if (verdict) {
          try {
            const Json v = Json::parse(*verdict);
            const auto& phrases = relation_phrases();
            if (v.is_object() && v.contains("relation") && v["relation"].is_string() &&
                std::find(phrases.begin(), phrases.end(), v["relation"].get<std::string>()) != phrases.end() &&
                (v["relation"] == phrase || v["relation"] == context.prior.phrase)) {
              chosen = v["relation"].get<std::string>();
            } else {
              result.log.push_back("verifier: schema_invalid: unexpected verdict");
            }
          } catch (const std::exception&) {
            result.log.push_back("verifier: schema_invalid: verdict is not JSON");
          }
        }
        phrase = chosen;
      }
      rel.phrase = phrase;
    }
  }

  if (rel.phrase != context.prior.phrase) result.bundle.coarse = render_coarse(rel);
  if (auto reply = call(clients.synthesizer, RefinementRole::kSynthesizer, synthesizer_prompt(rel),
                        {{"room", rel.room_label}, {"target", rel.target_label}, {"reference", rel.reference_label}})) {
    try {
      result.bundle.coarse = parse_synthesizer_reply(*reply, rel.target_label);
    } catch (const Error& e) {
      result.log.push_back("synthesizer: " + std::string(error_code_name(e.code())) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace navbench

// Eigen must come before httplib: the resolver headers httplib pulls in
// define macros that mangle Eigen's internals.
#include "styll/embedspace.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "styll/digest.hpp"
#include "styll/generation.hpp"
#include "styll/text.hpp"

namespace styll {

using nlohmann::json;

std::size_t count_tokens_simple(const std::string& text, TokenCounting mode) {
  if (mode == TokenCounting::kPerChar) return text.size();
  return text::whitespace_chunks(text).size();
}

namespace {

constexpr const char* kStep1Marker = "\n\nParaphrase the passage in a simple neutral style.\n\nRewrite:";
constexpr const char* kStep2Marker = "List some adjectives, comma-separated,";
constexpr const char* kDemoMarker = "Here is some text: {";

std::string last_passage_line(const std::string& prompt) {
  std::size_t start = prompt.rfind("Passage: ");
  if (start == std::string::npos) return {};
  start += 9;
  const std::size_t end = prompt.find('\n', start);
  return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

std::string EchoGenerator::complete(const std::string& prompt, const GenerationConfig&) {
  // Step 1: echo the passage between the prefix and the instruction.
  const std::size_t marker = prompt.find(kStep1Marker);
  if (marker != std::string::npos && prompt.rfind("Passage: ", 0) == 0) {
    return prompt.substr(9, marker - 9);
  }
  // Step 2: echo the last passage line.
  if (prompt.find(kStep2Marker) != std::string::npos) {
    return last_passage_line(prompt);
  }
  // Step 3: echo the source paraphrase from the final demonstration slot.
  const std::size_t demo = prompt.rfind(kDemoMarker);
  if (demo != std::string::npos) {
    const std::size_t start = demo + std::char_traits<char>::length(kDemoMarker);
    const std::size_t end = prompt.find('}', start);
    return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
  }
  return "ok";
}

std::string ScriptedGenerator::complete(const std::string&, const GenerationConfig&) {
  if (script_.empty()) {
    throw std::runtime_error("scripted generator exhausted its completions");
  }
  std::string next = std::move(script_.front());
  script_.pop_front();
  return next;
}

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("backend URL must include a scheme: " + url);
  }
  const std::size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

std::string http_post_json(const std::string& scheme_host, const std::string& path,
                           const json& payload) {
  httplib::Client client(scheme_host);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(300, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv("STYLL_API_KEY")) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path, headers, payload.dump(), "application/json");
  if (!res) {
    throw std::runtime_error("request to " + scheme_host + path +
                             " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw std::runtime_error("request to " + scheme_host + path + " returned status " +
                             std::to_string(res->status));
  }
  return res->body;
}

}  // namespace

HttpGenerator::HttpGenerator(const std::string& url) : name_("http:" + url) {
  std::tie(scheme_host_, path_) = split_url(url);
}

std::string HttpGenerator::complete(const std::string& prompt, const GenerationConfig& config) {
  json payload;
  payload["prompt"] = prompt;
  payload["temperature"] = config.temperature;
  payload["top_p"] = config.top_p;
  payload["max_new_tokens"] = config.max_new_tokens;
  payload["stop"] = config.stop_sequences;
  if (config.seed) payload["seed"] = *config.seed;
  const json reply = json::parse(http_post_json(scheme_host_, path_, payload));
  if (reply.contains("completion")) return reply.at("completion").get<std::string>();
  if (reply.contains("text")) return reply.at("text").get<std::string>();
  throw std::runtime_error("backend reply from " + name_ +
                           " has neither 'completion' nor 'text'");
}

HttpParaphraser::HttpParaphraser(const std::string& url) : name_("http:" + url) {
  std::tie(scheme_host_, path_) = split_url(url);
}

ParaphraseResult HttpParaphraser::paraphrase(const std::string& text) {
  const json reply =
      json::parse(http_post_json(scheme_host_, path_, json{{"text", text}}));
  if (reply.contains("paraphrase")) return {reply.at("paraphrase").get<std::string>(), false};
  if (reply.contains("text")) return {reply.at("text").get<std::string>(), false};
  throw std::runtime_error("paraphrase reply from " + name_ +
                           " has neither 'paraphrase' nor 'text'");
}

HttpSpace::HttpSpace(const std::string& url) : name_("http:" + url) {
  std::tie(scheme_host_, path_) = split_url(url);
}

EmbeddingVector HttpSpace::embed_set(std::span<const std::string> posts) const {
  json payload;
  payload["posts"] = std::vector<std::string>(posts.begin(), posts.end());
  const json reply = json::parse(http_post_json(scheme_host_, path_, payload));
  const auto values = reply.at("values").get<std::vector<double>>();
  if (values.empty()) throw std::runtime_error("space " + name_ + " returned an empty vector");
  if (dim_ == 0) dim_ = static_cast<Eigen::Index>(values.size());
  if (static_cast<Eigen::Index>(values.size()) != dim_) {
    throw std::runtime_error("space " + name_ + " changed dimension mid-run");
  }
  return Eigen::Map<const EmbeddingVector>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

CompletionCache::CompletionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string CompletionCache::digest(const std::string& backend, const std::string& prompt,
                                    const GenerationConfig& config) {
  json key;
  key["backend"] = backend;
  key["prompt"] = prompt;
  key["temperature"] = config.temperature;
  key["top_p"] = config.top_p;
  key["max_new_tokens"] = config.max_new_tokens;
  key["stop_sequences"] = config.stop_sequences;
  if (config.seed) {
    key["seed"] = *config.seed;
  } else {
    key["seed"] = nullptr;
  }
  return sha256_hex(key.dump());
}

std::optional<std::string> CompletionCache::lookup(const std::string& digest) const {
  const auto path = dir_ / (digest + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    return j.at("completion").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;  // corrupt entry: treat as a miss and recompute
  }
}

void CompletionCache::store(const std::string& digest, const std::string& backend,
                            const std::string& prompt, const GenerationConfig& config,
                            const std::string& completion) {
  json j;
  j["backend"] = backend;
  j["prompt"] = prompt;
  j["config"] = config.to_json();
  j["completion"] = completion;
  j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  std::lock_guard<std::mutex> lock(mutex_);
  const auto tmp = dir_ / (digest + ".tmp");
  const auto final_path = dir_ / (digest + ".json");
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write cache entry: " + tmp.string());
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, final_path);
}

std::string CachedGenerator::complete(const std::string& prompt, const GenerationConfig& config) {
  const std::string key = CompletionCache::digest(inner_.name(), prompt, config);
  if (auto hit = cache_.lookup(key)) return *hit;
  const std::string completion = inner_.complete(prompt, config);
  if (!text::trim(completion).empty()) {
    cache_.store(key, inner_.name(), prompt, config, completion);
  }
  return completion;
}

}  // namespace styll

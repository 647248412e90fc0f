#include "styll/generation.hpp"

#include <algorithm>
#include <stdexcept>

#include "styll/digest.hpp"
#include "styll/text.hpp"

namespace styll {

using nlohmann::json;

void GenerationConfig::validate() const {
  if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
  if (top_p <= 0.0 || top_p > 1.0) throw std::invalid_argument("top_p must be in (0, 1]");
  if (max_new_tokens <= 0) throw std::invalid_argument("max_new_tokens must be positive");
  if (context_limit <= max_new_tokens) {
    throw std::invalid_argument("context_limit must exceed max_new_tokens");
  }
}

json GenerationConfig::to_json() const {
  json j;
  j["temperature"] = temperature;
  j["top_p"] = top_p;
  j["max_new_tokens"] = max_new_tokens;
  j["stop_sequences"] = stop_sequences;
  j["context_limit"] = context_limit;
  if (seed) {
    j["seed"] = *seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

GenerationConfig GenerationConfig::from_json(const json& j) {
  GenerationConfig c;
  if (j.contains("temperature")) c.temperature = j.at("temperature").get<double>();
  if (j.contains("top_p")) c.top_p = j.at("top_p").get<double>();
  if (j.contains("max_new_tokens")) c.max_new_tokens = j.at("max_new_tokens").get<int>();
  if (j.contains("stop_sequences")) {
    c.stop_sequences = j.at("stop_sequences").get<std::vector<std::string>>();
  }
  if (j.contains("context_limit")) c.context_limit = j.at("context_limit").get<int>();
  if (j.contains("seed") && !j.at("seed").is_null()) {
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.validate();
  return c;
}

std::string StyleDescriptors::render() const {
  std::string out;
  for (std::size_t i = 0; i < adjectives.size(); ++i) {
    if (i > 0) out += ", ";
    out += adjectives[i];
  }
  return out;
}

void StyleDescriptors::validate() const {
  if (adjectives.empty() || adjectives.size() > 10) {
    throw std::invalid_argument("style descriptors must hold 1..10 adjectives");
  }
  for (const auto& a : adjectives) {
    if (a.empty()) throw std::invalid_argument("empty style descriptor");
    if (a.find(',') != std::string::npos) {
      throw std::invalid_argument("style descriptor contains a comma: " + a);
    }
    if (a != text::to_lower_ascii(a)) {
      throw std::invalid_argument("style descriptor not lowercase: " + a);
    }
  }
}

StyleDescriptors default_descriptors() { return StyleDescriptors{{"distinctive"}}; }

std::string step1_prompt(const std::string& post) {
  return "Passage: " + post + "\n\nParaphrase the passage in a simple neutral style.\n\nRewrite:";
}

std::string step2_prompt(std::span<const std::string> posts) {
  std::string prompt;
  for (const auto& p : posts) {
    prompt += "Passage: " + p + "\n";
  }
  prompt +=
      "List some adjectives, comma-separated, that describe the writing style of the author of "
      "these passages:";
  return prompt;
}

namespace {

bool has_ascii_alpha(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return text::is_ascii_alpha(c); });
}

std::size_t word_count(const std::string& s) { return text::whitespace_chunks(s).size(); }

/// Strips surrounding whitespace and non-alphanumeric decoration ("bold." ->
/// "bold"), keeping interior hyphens and spaces.
std::string clean_descriptor(std::string entry) {
  entry = text::trim(entry);
  std::size_t b = 0;
  std::size_t e = entry.size();
  while (b < e && !text::is_ascii_alnum(entry[b]) &&
         static_cast<unsigned char>(entry[b]) < 0x80) {
    ++b;
  }
  while (e > b && !text::is_ascii_alnum(entry[e - 1]) &&
         static_cast<unsigned char>(entry[e - 1]) < 0x80) {
    --e;
  }
  return text::to_lower_ascii(entry.substr(b, e - b));
}

}  // namespace

StyleDescriptors parse_descriptors(const std::string& completion, bool* defaulted) {
  StyleDescriptors out;
  std::size_t pos = 0;
  while (pos <= completion.size()) {
    const std::size_t comma = completion.find(',', pos);
    const std::string raw = completion.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? completion.size() + 1 : comma + 1;
    const std::string entry = clean_descriptor(raw);
    if (entry.empty() || !has_ascii_alpha(entry)) continue;
    if (word_count(entry) > 3) continue;
    if (std::find(out.adjectives.begin(), out.adjectives.end(), entry) != out.adjectives.end()) {
      continue;
    }
    out.adjectives.push_back(entry);
    if (out.adjectives.size() == 10) break;
  }
  if (out.adjectives.empty()) {
    if (defaulted) *defaulted = true;
    return default_descriptors();
  }
  if (defaulted) *defaulted = false;
  return out;
}

namespace {

constexpr std::size_t kMinDemonstrations = 4;

std::string rewrite_phrase(const StyleDescriptors& descriptors, bool use_descriptors) {
  if (!use_descriptors) return "Here is a rewrite of the text:";
  return "Here is a rewrite of the text that is more " + descriptors.render() + ":";
}

std::string render_transfer_prompt(std::span<const std::string> target_paraphrases,
                                   std::span<const std::string> target_posts,
                                   const std::string& phrase,
                                   const std::string& source_paraphrase, std::size_t skip) {
  std::string prompt;
  for (std::size_t i = skip; i < target_posts.size(); ++i) {
    prompt += "Here is some text: {" + target_paraphrases[i] + "} " + phrase + " {" +
              target_posts[i] + "} ";
  }
  prompt += "Here is some text: {" + source_paraphrase + "} " + phrase + " {";
  return prompt;
}

std::string wrap_backend_error(const TextGenerator& generator, const std::string& prompt,
                               const GenerationConfig& config, const std::exception& e) {
  return "backend " + generator.name() + " failed (prompt digest " +
         CompletionCache::digest(generator.name(), prompt, config) + "): " + e.what();
}

}  // namespace

TransferPrompt build_transfer_prompt(std::span<const std::string> target_paraphrases,
                                     std::span<const std::string> target_posts,
                                     const StyleDescriptors& descriptors,
                                     const std::string& source_paraphrase, bool use_descriptors,
                                     const TextGenerator& generator,
                                     const GenerationConfig& config) {
  if (target_paraphrases.size() != target_posts.size()) {
    throw std::invalid_argument("build_transfer_prompt: paraphrases and posts misaligned");
  }
  if (use_descriptors) descriptors.validate();
  const std::string phrase = rewrite_phrase(descriptors, use_descriptors);
  const std::size_t total = target_posts.size();
  const std::size_t budget =
      config.context_limit > config.max_new_tokens
          ? static_cast<std::size_t>(config.context_limit - config.max_new_tokens)
          : 0;

  std::size_t skip = 0;
  while (true) {
    std::string prompt = render_transfer_prompt(target_paraphrases, target_posts, phrase,
                                                source_paraphrase, skip);
    if (generator.count_tokens(prompt) <= budget) {
      return TransferPrompt{std::move(prompt), static_cast<int>(skip)};
    }
    if (total - skip <= kMinDemonstrations) {
      throw std::runtime_error(
          "transfer prompt does not fit the context limit of " +
          std::to_string(config.context_limit) + " tokens with the minimum of " +
          std::to_string(kMinDemonstrations) + " demonstrations (" +
          std::to_string(generator.count_tokens(prompt)) + " prompt tokens + " +
          std::to_string(config.max_new_tokens) + " completion tokens)");
    }
    ++skip;
  }
}

ParaphraseResult neutral_paraphrase(const std::string& post, TextGenerator& generator,
                                    const GenerationConfig& config) {
  if (text::trim(post).empty()) {
    throw std::invalid_argument("neutral_paraphrase: empty post");
  }
  const std::string prompt = step1_prompt(post);
  std::string completion;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      completion = text::trim(generator.complete(prompt, config));
    } catch (const std::exception& e) {
      if (attempt == 0) continue;
      throw std::runtime_error(wrap_backend_error(generator, prompt, config, e));
    }
    if (!completion.empty()) return {completion, false};
  }
  return {post, true};
}

DescribeResult describe_style(const AuthorEpisode& episode, TextGenerator& generator,
                              const GenerationConfig& config) {
  const std::vector<std::string> posts = episode.post_texts();
  if (posts.empty()) throw std::invalid_argument("describe_style: episode has no posts");

  const std::size_t budget =
      config.context_limit > config.max_new_tokens
          ? static_cast<std::size_t>(config.context_limit - config.max_new_tokens)
          : 0;
  std::size_t skip = 0;
  std::string prompt;
  while (true) {
    prompt = step2_prompt(std::span(posts).subspan(skip));
    if (generator.count_tokens(prompt) <= budget) break;
    if (posts.size() - skip <= kMinDemonstrations) {
      throw std::runtime_error("descriptor prompt does not fit the context limit of " +
                               std::to_string(config.context_limit) + " tokens with " +
                               std::to_string(kMinDemonstrations) + " passages");
    }
    ++skip;
  }

  std::string completion;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      completion = text::trim(generator.complete(prompt, config));
    } catch (const std::exception& e) {
      if (attempt == 0) continue;
      throw std::runtime_error(wrap_backend_error(generator, prompt, config, e));
    }
    if (!completion.empty()) break;
  }
  DescribeResult result;
  result.descriptors = parse_descriptors(completion, &result.defaulted);
  return result;
}

TransferPostOutcome style_transfer_post(const std::string& source_paraphrase,
                                        const TransferContext& context,
                                        TextGenerator& generator,
                                        const GenerationConfig& config) {
  GenerationConfig step_config = config;
  step_config.stop_sequences = {"}"};

  TransferPostOutcome outcome;
  const TransferPrompt built =
      build_transfer_prompt(context.target_paraphrases, context.target_posts,
                            context.descriptors, source_paraphrase, context.use_descriptors,
                            generator, step_config);
  outcome.prompt = built.prompt;
  outcome.dropped_demos = built.dropped_demos;

  auto postprocess = [&](std::string completion) {
    for (const auto& stop : step_config.stop_sequences) {
      const std::size_t at = completion.find(stop);
      if (at != std::string::npos) completion.erase(at);
    }
    return text::trim(completion);
  };

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string completion;
    try {
      completion = generator.complete(built.prompt, step_config);
    } catch (const std::exception& e) {
      if (attempt == 0) continue;
      throw std::runtime_error(wrap_backend_error(generator, built.prompt, step_config, e));
    }
    outcome.text = postprocess(std::move(completion));
    if (!outcome.text.empty()) return outcome;
  }
  outcome.text = source_paraphrase;
  outcome.fallback = true;
  return outcome;
}

ParaphraseResult PromptParaphraser::paraphrase(const std::string& text) {
  return neutral_paraphrase(text, generator_, config_);
}

TransferResult transfer_episode(const TransferPair& pair, PipelineBackends backends,
                                const GenerationConfig& config, bool use_descriptors) {
  config.validate();
  const std::vector<std::string> source_posts = pair.source.post_texts();
  const std::vector<std::string> target_posts = pair.target.post_texts();

  TransferResult result;
  result.pair = pair;
  result.method = methods::kStyll;
  result.config = {{"decoding", config.to_json()},
                   {"use_descriptors", use_descriptors},
                   {"step1", backends.step1.name()},
                   {"step2", backends.step2.name()},
                   {"step3", backends.step3.name()}};

  TransferContext context;
  context.target_posts = target_posts;
  context.use_descriptors = use_descriptors;
  for (const auto& post : target_posts) {
    context.target_paraphrases.push_back(backends.step1.paraphrase(post).text);
  }
  if (use_descriptors) {
    const DescribeResult described = describe_style(pair.target, backends.step2, config);
    context.descriptors = described.descriptors;
    result.trace.descriptors_defaulted = described.defaulted;
    result.trace.descriptors = context.descriptors.adjectives;
  } else {
    context.descriptors = default_descriptors();  // unused in the prompt
  }
  result.trace.target_paraphrases = context.target_paraphrases;

  std::size_t failures = 0;
  for (const auto& post : source_posts) {
    PostTrace trace;
    std::string output;
    try {
      const ParaphraseResult para = backends.step1.paraphrase(post);
      trace.source_paraphrase = para.text;
      trace.paraphrase_fallback = para.fallback;
      const TransferPostOutcome outcome =
          style_transfer_post(para.text, context, backends.step3, config);
      trace.full_prompt = outcome.prompt;
      trace.transfer_fallback = outcome.fallback;
      trace.dropped_demos = outcome.dropped_demos;
      output = outcome.text;
    } catch (const std::exception& e) {
      ++failures;
      trace.error = e.what();
      output = trace.source_paraphrase.empty() ? post : trace.source_paraphrase;
    }
    result.outputs.push_back(std::move(output));
    result.trace.posts.push_back(std::move(trace));
  }
  if (failures > source_posts.size() / 2) {
    throw std::runtime_error("transfer " + pair.source.author_id + "->" +
                             pair.target.author_id + " failed on " + std::to_string(failures) +
                             " of " + std::to_string(source_posts.size()) + " posts");
  }
  return result;
}

TransferResult para_baseline(const TransferPair& pair, Paraphraser& paraphraser,
                             const GenerationConfig& config, const std::string& method_id) {
  config.validate();
  TransferResult result;
  result.pair = pair;
  result.method = method_id;
  result.config = {{"decoding", config.to_json()}, {"paraphraser", paraphraser.name()}};

  std::size_t failures = 0;
  for (const auto& post : pair.source.post_texts()) {
    PostTrace trace;
    std::string output;
    try {
      const ParaphraseResult para = paraphraser.paraphrase(post);
      trace.source_paraphrase = para.text;
      trace.paraphrase_fallback = para.fallback;
      output = para.text;
    } catch (const std::exception& e) {
      ++failures;
      trace.error = e.what();
      output = post;
    }
    result.outputs.push_back(std::move(output));
    result.trace.posts.push_back(std::move(trace));
  }
  if (failures > pair.source.posts.size() / 2) {
    throw std::runtime_error("paraphrase baseline failed on " + std::to_string(failures) +
                             " posts for source " + pair.source.author_id);
  }
  return result;
}

}  // namespace styll

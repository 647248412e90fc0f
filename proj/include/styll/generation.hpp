#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "styll/corpus.hpp"
#include "styll/transfer.hpp"

namespace styll {

struct GenerationConfig {
  double temperature = 0.7;
  double top_p = 1.0;
  int max_new_tokens = 256;
  std::vector<std::string> stop_sequences;
  int context_limit = 2048;
  std::optional<std::uint64_t> seed;

  void validate() const;
  nlohmann::json to_json() const;
  static GenerationConfig from_json(const nlohmann::json& j);
};

/// Completion backend. Adapters wrap real models (in-process or HTTP); the
/// mock implementations below keep the whole pipeline testable offline.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const std::string& prompt, const GenerationConfig& config) = 0;
  virtual std::size_t count_tokens(const std::string& text) const = 0;
};

enum class TokenCounting { kPerWord, kPerChar };

std::size_t count_tokens_simple(const std::string& text, TokenCounting mode);

/// Echoes the passage embedded in a known prompt template: the step-1
/// passage, the last step-2 passage, or the step-3 source paraphrase.
class EchoGenerator : public TextGenerator {
 public:
  explicit EchoGenerator(TokenCounting counting = TokenCounting::kPerWord)
      : counting_(counting) {}
  std::string name() const override { return "echo"; }
  std::string complete(const std::string& prompt, const GenerationConfig& config) override;
  std::size_t count_tokens(const std::string& text) const override {
    return count_tokens_simple(text, counting_);
  }

 private:
  TokenCounting counting_;
};

/// Always returns the same completion.
class FixedGenerator : public TextGenerator {
 public:
  explicit FixedGenerator(std::string completion, TokenCounting counting = TokenCounting::kPerWord)
      : completion_(std::move(completion)), counting_(counting) {}
  std::string name() const override { return "fixed"; }
  std::string complete(const std::string&, const GenerationConfig&) override {
    return completion_;
  }
  std::size_t count_tokens(const std::string& text) const override {
    return count_tokens_simple(text, counting_);
  }

 private:
  std::string completion_;
  TokenCounting counting_;
};

/// Plays back a fixed sequence of completions; throws once exhausted.
class ScriptedGenerator : public TextGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> script,
                             TokenCounting counting = TokenCounting::kPerWord)
      : script_(script.begin(), script.end()), counting_(counting) {}
  std::string name() const override { return "scripted"; }
  std::string complete(const std::string&, const GenerationConfig&) override;
  std::size_t count_tokens(const std::string& text) const override {
    return count_tokens_simple(text, counting_);
  }

 private:
  std::deque<std::string> script_;
  TokenCounting counting_;
};

/// Test wrapper that counts backend invocations and records every prompt.
class RecordingGenerator : public TextGenerator {
 public:
  explicit RecordingGenerator(TextGenerator& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  std::string complete(const std::string& prompt, const GenerationConfig& config) override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      prompts_.push_back(prompt);
    }
    ++calls_;
    return inner_.complete(prompt, config);
  }
  std::size_t count_tokens(const std::string& text) const override {
    return inner_.count_tokens(text);
  }
  std::size_t calls() const { return calls_.load(); }
  std::vector<std::string> prompts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return prompts_;
  }

 private:
  TextGenerator& inner_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
};

/// HTTP adapter. POSTs {prompt, temperature, top_p, max_new_tokens, stop,
/// seed} as JSON to the configured endpoint and reads {completion} (or
/// {text}) back. Credentials come from the STYLL_API_KEY environment
/// variable, sent as a bearer token when set.
class HttpGenerator : public TextGenerator {
 public:
  explicit HttpGenerator(const std::string& url);
  std::string name() const override { return name_; }
  std::string complete(const std::string& prompt, const GenerationConfig& config) override;
  /// Approximate BPE cost: one token per 4 bytes, rounded up.
  std::size_t count_tokens(const std::string& text) const override {
    return (text.size() + 3) / 4;
  }

 private:
  std::string name_;
  std::string scheme_host_;
  std::string path_;
};

/// Disk cache of completions keyed by a SHA-256 digest over the backend name,
/// the prompt, and every decoding field. One JSON file per digest holding
/// {backend, prompt, config, completion, timestamp}. Writes go through a
/// temp-file rename and an in-process mutex; readers may run concurrently.
class CompletionCache {
 public:
  explicit CompletionCache(std::filesystem::path dir);
  static std::string digest(const std::string& backend, const std::string& prompt,
                            const GenerationConfig& config);
  std::optional<std::string> lookup(const std::string& digest) const;
  void store(const std::string& digest, const std::string& backend, const std::string& prompt,
             const GenerationConfig& config, const std::string& completion);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

/// Serves completions from the cache, consulting the wrapped backend only on
/// misses. Empty completions are never cached so the retry path can reach
/// the backend again.
class CachedGenerator : public TextGenerator {
 public:
  CachedGenerator(TextGenerator& inner, CompletionCache& cache) : inner_(inner), cache_(cache) {}
  std::string name() const override { return inner_.name(); }
  std::string complete(const std::string& prompt, const GenerationConfig& config) override;
  std::size_t count_tokens(const std::string& text) const override {
    return inner_.count_tokens(text);
  }

 private:
  TextGenerator& inner_;
  CompletionCache& cache_;
};

struct ParaphraseResult {
  std::string text;
  bool fallback = false;
};

/// Step-1 slot: anything that maps a post to its neutral paraphrase. The
/// prompt-based implementation wraps a TextGenerator; external paraphrase
/// models plug in over HTTP.
class Paraphraser {
 public:
  virtual ~Paraphraser() = default;
  virtual std::string name() const = 0;
  virtual ParaphraseResult paraphrase(const std::string& text) = 0;
};

class PromptParaphraser : public Paraphraser {
 public:
  PromptParaphraser(TextGenerator& generator, GenerationConfig config)
      : generator_(generator), config_(std::move(config)) {}
  std::string name() const override { return "prompt:" + generator_.name(); }
  ParaphraseResult paraphrase(const std::string& text) override;

 private:
  TextGenerator& generator_;
  GenerationConfig config_;
};

/// Mock external adapter: the paraphrase is the input text.
class IdentityParaphraser : public Paraphraser {
 public:
  std::string name() const override { return "identity"; }
  ParaphraseResult paraphrase(const std::string& text) override { return {text, false}; }
};

/// External paraphrase model over HTTP: POST {text} -> {paraphrase}.
class HttpParaphraser : public Paraphraser {
 public:
  explicit HttpParaphraser(const std::string& url);
  std::string name() const override { return name_; }
  ParaphraseResult paraphrase(const std::string& text) override;

 private:
  std::string name_;
  std::string scheme_host_;
  std::string path_;
};

/// 1..10 lowercase comma-free adjectives, rendered comma-plus-space joined.
struct StyleDescriptors {
  std::vector<std::string> adjectives;
  std::string render() const;
  void validate() const;
};

/// Substituted when a descriptor completion cannot be parsed.
StyleDescriptors default_descriptors();

/// Exact zero-shot paraphrase prompt of pipeline step 1.
std::string step1_prompt(const std::string& post);

/// Exact zero-shot descriptor prompt of pipeline step 2 over the given
/// passages.
std::string step2_prompt(std::span<const std::string> posts);

/// Parses a step-2 completion: split on commas, trim, lowercase, drop
/// entries longer than 3 words or without alphabetic content, dedupe
/// preserving order, keep at most 10. Falls back to default_descriptors()
/// when nothing survives.
StyleDescriptors parse_descriptors(const std::string& completion, bool* defaulted = nullptr);

struct TransferPrompt {
  std::string prompt;
  int dropped_demos = 0;
};

/// Builds the step-3 few-shot prompt: 16 demonstration pairs of
/// "Here is some text: {paraphrase} Here is a rewrite of the text that is
/// more <descriptors>: {post}" followed by the source paraphrase and an open
/// brace. Without descriptors the rewrite phrase reduces to "Here is a
/// rewrite of the text:". When the prompt plus max_new_tokens exceeds the
/// context limit, whole demonstration pairs are dropped from the front, never
/// below 4; the source paraphrase and final open brace are never dropped.
TransferPrompt build_transfer_prompt(std::span<const std::string> target_paraphrases,
                                     std::span<const std::string> target_posts,
                                     const StyleDescriptors& descriptors,
                                     const std::string& source_paraphrase, bool use_descriptors,
                                     const TextGenerator& generator,
                                     const GenerationConfig& config);

/// Step 1 for one post. Empty completions retry once, then fall back to the
/// original post with the fallback flag set.
ParaphraseResult neutral_paraphrase(const std::string& post, TextGenerator& generator,
                                    const GenerationConfig& config);

struct DescribeResult {
  StyleDescriptors descriptors;
  bool defaulted = false;
};

/// Step 2 over a target episode. Over-long prompts drop leading passages
/// (never below 4); unparseable completions substitute the defaults.
DescribeResult describe_style(const AuthorEpisode& episode, TextGenerator& generator,
                              const GenerationConfig& config);

struct TransferContext {
  std::vector<std::string> target_paraphrases;
  std::vector<std::string> target_posts;
  StyleDescriptors descriptors;
  bool use_descriptors = true;
};

struct TransferPostOutcome {
  std::string text;
  std::string prompt;
  bool fallback = false;
  int dropped_demos = 0;
};

/// Step 3 for one source post: completes the few-shot prompt with "}" as the
/// stop sequence; the completion is cut at the first stop match and trimmed.
/// Empty completions retry once, then fall back to the source paraphrase.
TransferPostOutcome style_transfer_post(const std::string& source_paraphrase,
                                        const TransferContext& context,
                                        TextGenerator& generator, const GenerationConfig& config);

/// The three independently pluggable backend slots of the pipeline.
struct PipelineBackends {
  Paraphraser& step1;
  TextGenerator& step2;
  TextGenerator& step3;
};

/// Full pipeline over one pair: paraphrase the 16 target posts, describe the
/// target style, then transfer each of the 16 source posts. Per-post errors
/// are recorded in the trace; the call fails only when more than half the
/// posts fail.
TransferResult transfer_episode(const TransferPair& pair, PipelineBackends backends,
                                const GenerationConfig& config, bool use_descriptors = true);

/// Paraphrase-only baseline: outputs are paraphrases of the source posts;
/// no target information is consulted. method_id selects para-neu/para-div
/// labeling.
TransferResult para_baseline(const TransferPair& pair, Paraphraser& paraphraser,
                             const GenerationConfig& config,
                             const std::string& method_id = methods::kParaNeu);

}  // namespace styll

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "styll/rng.hpp"
#include "styll/toolkit.hpp"
#include "styll/transfer.hpp"

namespace styll {

/// Linguistic services behind the handcrafted baselines. Defaults are the
/// deterministic built-in implementations; swap any slot for model-backed
/// adapters.
struct Toolkit {
  std::unique_ptr<Tokenizer> tokenizer = std::make_unique<SimpleTokenizer>();
  std::unique_ptr<PosTagger> tagger = std::make_unique<RuleBasedTagger>();
  std::unique_ptr<SynonymLexicon> lexicon =
      std::make_unique<TableLexicon>(TableLexicon::builtin());
  ContractionTable contractions = ContractionTable::builtin();
  std::unique_ptr<Morphology> morphology = std::make_unique<EnglishMorphology>();
  std::unique_ptr<TokenEmbeddingProvider> embeddings = std::make_unique<HashTokenEmbedding>();
};

enum class CapitalizationStyle { kUppercase, kLowercase, kSentenceCase };
std::string to_string(CapitalizationStyle style);

/// Total classification: uppercase/lowercase when the post has cased (ASCII
/// alphabetic) characters and they are all upper/lower; sentence case
/// otherwise (mixed case and caseless posts included).
CapitalizationStyle classify_capitalization(const std::string& post);
std::string apply_capitalization(const std::string& post, CapitalizationStyle style);

/// Empirical categorical distribution over string labels.
struct StyleDistribution {
  std::vector<std::string> labels;
  std::vector<double> probabilities;

  static StyleDistribution from_counts(
      const std::vector<std::pair<std::string, std::size_t>>& counts);
  const std::string& sample(SeededRng& rng) const;
  void validate() const;  // probabilities sum to 1 +/- 1e-9
};

/// Target-token worth injecting: a non-ASCII-containing chunk or a run of
/// >= 2 punctuation characters with no end mark (chunks made purely of end
/// marks belong to the punctuation baseline and are excluded).
struct DistinctiveToken {
  std::string surface;
  double per_post_frequency = 0.0;
};

std::vector<DistinctiveToken> distinctive_tokens(std::span<const std::string> posts);

struct TokenEmbeddingEntry {
  Eigen::VectorXd mean;
  PosTag pos = PosTag::kX;  // majority tag over occurrences
  std::size_t count = 0;
};

/// token surface -> (mean embedding, POS, count) over one author's posts.
using TokenEmbeddingTable = std::map<std::string, TokenEmbeddingEntry>;

TokenEmbeddingTable build_token_embedding_table(std::span<const std::string> posts,
                                                const Tokenizer& tokenizer,
                                                const PosTagger& tagger,
                                                const TokenEmbeddingProvider& provider);

/// Byte span of one injected " token" substring in an output post.
struct EmojInjection {
  std::size_t post_index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Post-level kernels shared by the baselines and their composition. Seeded
/// kernels derive one RNG per post as SeededRng(SeededRng::derive(seed, i)),
/// making every output a pure function of (posts, seed).
std::vector<std::string> capi_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed);
std::vector<std::string> cont_posts(std::span<const std::string> source,
                                    std::span<const std::string> target,
                                    const ContractionTable& table, std::uint64_t seed);
std::vector<std::string> synm_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, const Toolkit& toolkit);
std::vector<std::string> punc_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed,
                                    std::vector<std::string>* warnings = nullptr);
std::vector<std::string> emoj_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed,
                                    std::vector<EmojInjection>* injections = nullptr);
std::vector<std::string> embed_swap_posts(std::span<const std::string> source,
                                          std::span<const std::string> target,
                                          const Toolkit& toolkit, double threshold = 0.6);

/// Seed streams used when ling derives per-stage seeds from its master seed.
namespace ling_streams {
inline constexpr std::uint64_t kCont = 1;
inline constexpr std::uint64_t kCapi = 2;
inline constexpr std::uint64_t kPunc = 3;
inline constexpr std::uint64_t kEmoj = 4;
}  // namespace ling_streams

TransferResult copy_src(const TransferPair& pair);
TransferResult copy_tgt(const TransferPair& pair);
TransferResult capi_baseline(const TransferPair& pair, std::uint64_t seed);
TransferResult cont_baseline(const TransferPair& pair, const ContractionTable& table,
                             std::uint64_t seed);
TransferResult synm_baseline(const TransferPair& pair, const Toolkit& toolkit);
TransferResult punc_baseline(const TransferPair& pair, std::uint64_t seed);
TransferResult emoj_baseline(const TransferPair& pair, std::uint64_t seed);
/// Synm -> Cont -> Capi -> Punc -> Emoj, each stage consuming the previous
/// output, with per-stage seeds derived via ling_streams.
TransferResult ling_baseline(const TransferPair& pair, const Toolkit& toolkit,
                             std::uint64_t seed);
TransferResult embed_swap_baseline(const TransferPair& pair, const Toolkit& toolkit,
                                   double threshold = 0.6);

}  // namespace styll

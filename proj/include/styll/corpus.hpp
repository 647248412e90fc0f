#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace styll {

/// Number of posts that make up one author episode.
inline constexpr std::size_t kPostsPerEpisode = 16;

struct Post {
  std::string post_id;
  std::string author_id;
  std::string subreddit;
  std::string text;
};

/// An author identity plus exactly kPostsPerEpisode posts, the unit over
/// which style is represented and transferred.
struct AuthorEpisode {
  std::string author_id;
  std::vector<Post> posts;

  std::vector<std::string> post_texts() const;
  std::size_t distinct_subreddits() const;
};

enum class VariantKind { kRandom, kSingle, kDiverse };

std::string to_string(VariantKind kind);
VariantKind variant_kind_from_string(const std::string& s);

struct VariantParams {
  /// Authors per role (sources and targets each). 15 gives the standard
  /// 225-pair grid; smaller values support toy runs.
  std::size_t per_role = 15;
  /// Community every post must belong to (kind == kSingle).
  std::string designated_community;
  /// Minimum distinct communities per episode (kind == kDiverse).
  std::size_t min_distinct = 13;
};

struct DatasetVariant {
  VariantKind kind = VariantKind::kRandom;
  std::uint64_t seed = 0;
  VariantParams params;
  std::vector<AuthorEpisode> sources;
  std::vector<AuthorEpisode> targets;
};

/// One source -> target cell of the transfer grid.
struct TransferPair {
  AuthorEpisode source;
  AuthorEpisode target;
};

/// Loads a line-delimited JSON corpus (one post object per line with fields
/// post_id, author_id, subreddit, text). Authors with fewer than
/// kPostsPerEpisode posts are dropped with a warning; authors with more are
/// truncated to the first 16 posts in file order. Malformed lines raise with
/// their line number; a corpus yielding zero episodes raises as well.
std::vector<AuthorEpisode> load_corpus(const std::filesystem::path& path,
                                       std::vector<std::string>* warnings = nullptr);

/// The k-th most common subreddit by post count over the corpus (1-based k),
/// ties broken lexicographically.
std::string kth_most_common_subreddit(const std::vector<AuthorEpisode>& corpus, std::size_t k);

/// Samples 2 * params.per_role distinct qualifying episodes with a seeded
/// Fisher-Yates draw and splits them into sources and targets. Deterministic
/// in (corpus order, kind, seed, params).
DatasetVariant build_variant(const std::vector<AuthorEpisode>& corpus, VariantKind kind,
                             std::uint64_t seed, const VariantParams& params);

/// All source x target cells in (source index, target index) order.
std::vector<TransferPair> enumerate_pairs(const DatasetVariant& variant);

/// Self-contained variant file (kind, seed, params and all episodes inline).
void save_variant(const DatasetVariant& variant, const std::filesystem::path& path);
DatasetVariant load_variant(const std::filesystem::path& path);

}  // namespace styll

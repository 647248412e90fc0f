#pragma once

// Shared helpers for the test suites: synthetic corpora, toy variants, and a
// scratch-directory guard.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "styll/corpus.hpp"
#include "styll/rng.hpp"

namespace testsupport {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("styll_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline styll::AuthorEpisode make_episode(const std::string& author,
                                         const std::vector<std::string>& texts,
                                         const std::string& subreddit = "r/test") {
  styll::AuthorEpisode ep;
  ep.author_id = author;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    ep.posts.push_back({author + "_p" + std::to_string(i), author, subreddit, texts[i]});
  }
  return ep;
}

/// 16 deterministic, author-distinct posts built from a per-author word pool.
inline styll::AuthorEpisode synthetic_episode(const std::string& author, std::uint64_t seed,
                                              const std::string& subreddit = "r/test") {
  styll::SeededRng rng(styll::SeededRng::derive(seed, std::hash<std::string>{}(author)));
  static const char* kWords[] = {"game",  "team",   "play",  "really", "think", "good",
                                 "time",  "people", "thing", "great",  "year",  "water",
                                 "music", "movie",  "coach", "season", "road",  "coffee",
                                 "night", "story"};
  std::vector<std::string> texts;
  for (int p = 0; p < 16; ++p) {
    std::ostringstream post;
    post << author << "word" << p;  // guarantees per-author vocabulary
    const int words = 4 + static_cast<int>(rng.below(6));
    for (int w = 0; w < words; ++w) {
      post << " " << kWords[rng.below(std::size(kWords))];
    }
    post << ".";
    texts.push_back(post.str());
  }
  return make_episode(author, texts, subreddit);
}

inline styll::DatasetVariant toy_variant(std::size_t per_role, std::uint64_t seed = 7) {
  styll::DatasetVariant v;
  v.kind = styll::VariantKind::kRandom;
  v.seed = seed;
  v.params.per_role = per_role;
  for (std::size_t i = 0; i < per_role; ++i) {
    v.sources.push_back(synthetic_episode("src" + std::to_string(i), seed));
    v.targets.push_back(synthetic_episode("tgt" + std::to_string(i), seed + 1));
  }
  return v;
}

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& line : lines) out << line << "\n";
}

inline std::string corpus_line(const std::string& post_id, const std::string& author,
                               const std::string& subreddit, const std::string& text) {
  std::ostringstream out;
  out << "{\"post_id\":\"" << post_id << "\",\"author_id\":\"" << author
      << "\",\"subreddit\":\"" << subreddit << "\",\"text\":\"" << text << "\"}";
  return out.str();
}

/// Lines for `count` authors with `posts_each` posts apiece.
inline std::vector<std::string> corpus_lines(std::size_t count, std::size_t posts_each,
                                             const std::string& subreddit = "r/test") {
  std::vector<std::string> lines;
  for (std::size_t a = 0; a < count; ++a) {
    const std::string author = "author" + std::to_string(a);
    for (std::size_t p = 0; p < posts_each; ++p) {
      lines.push_back(corpus_line(author + "_" + std::to_string(p), author, subreddit,
                                  author + " says thing " + std::to_string(p)));
    }
  }
  return lines;
}

}  // namespace testsupport

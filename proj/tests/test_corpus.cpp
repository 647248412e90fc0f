#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "styll/corpus.hpp"
#include "support.hpp"

using namespace styll;
using testsupport::TempDir;

TEST_CASE("load_corpus keeps exact-size authors") {
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  testsupport::write_lines(file, testsupport::corpus_lines(2, 16));
  const auto episodes = load_corpus(file);
  REQUIRE(episodes.size() == 2);
  CHECK(episodes[0].author_id == "author0");
  CHECK(episodes[0].posts.size() == kPostsPerEpisode);
  CHECK(episodes[1].author_id == "author1");
}

TEST_CASE("load_corpus drops short authors with a warning") {
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  auto lines = testsupport::corpus_lines(1, 16);
  for (int p = 0; p < 15; ++p) {
    lines.push_back(testsupport::corpus_line("short_" + std::to_string(p), "short", "r/test",
                                             "text " + std::to_string(p)));
  }
  testsupport::write_lines(file, lines);
  std::vector<std::string> warnings;
  const auto episodes = load_corpus(file, &warnings);
  REQUIRE(episodes.size() == 1);
  CHECK(episodes[0].author_id == "author0");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("short") != std::string::npos);
  CHECK(warnings[0].find("15") != std::string::npos);
}

TEST_CASE("load_corpus truncates long authors to the first 16 in file order") {
  // Hand-built fixture: 20 posts whose ids encode their file position.
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  std::vector<std::string> lines;
  for (int p = 0; p < 20; ++p) {
    lines.push_back(testsupport::corpus_line("pos" + std::to_string(p), "long", "r/test",
                                             "post number " + std::to_string(p)));
  }
  testsupport::write_lines(file, lines);
  const auto episodes = load_corpus(file);
  REQUIRE(episodes.size() == 1);
  REQUIRE(episodes[0].posts.size() == 16);
  for (int p = 0; p < 16; ++p) {
    CHECK(episodes[0].posts[p].post_id == "pos" + std::to_string(p));
  }
}

TEST_CASE("load_corpus rejects malformed lines with their line number") {
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  auto lines = testsupport::corpus_lines(1, 16);
  lines.insert(lines.begin() + 3, "{not json");
  testsupport::write_lines(file, lines);
  CHECK_THROWS_WITH_AS(load_corpus(file), doctest::Contains("line 4"), std::runtime_error);
}

TEST_CASE("load_corpus rejects empty text and duplicate post ids") {
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  SUBCASE("empty text") {
    testsupport::write_lines(file, {testsupport::corpus_line("a", "x", "r/test", "   ")});
    CHECK_THROWS_AS(load_corpus(file), std::runtime_error);
  }
  SUBCASE("duplicate post id") {
    testsupport::write_lines(file, {testsupport::corpus_line("a", "x", "r/test", "one"),
                                    testsupport::corpus_line("a", "x", "r/test", "two")});
    CHECK_THROWS_WITH_AS(load_corpus(file), doctest::Contains("duplicate"),
                         std::runtime_error);
  }
}

TEST_CASE("load_corpus with zero qualifying authors is an explicit error") {
  TempDir dir("corpus");
  const auto file = dir.path() / "corpus.jsonl";
  testsupport::write_lines(file, testsupport::corpus_lines(3, 5));
  CHECK_THROWS_AS(load_corpus(file), std::runtime_error);
}

TEST_CASE("kth_most_common_subreddit ranks by post count") {
  std::vector<AuthorEpisode> corpus;
  for (int a = 0; a < 4; ++a) {
    corpus.push_back(
        testsupport::synthetic_episode("a" + std::to_string(a), 1, "r/AskReddit"));
  }
  for (int a = 0; a < 2; ++a) {
    corpus.push_back(testsupport::synthetic_episode("b" + std::to_string(a), 1, "r/CFB"));
  }
  corpus.push_back(testsupport::synthetic_episode("c0", 1, "r/aww"));
  CHECK(kth_most_common_subreddit(corpus, 1) == "r/AskReddit");
  CHECK(kth_most_common_subreddit(corpus, 2) == "r/CFB");
  CHECK(kth_most_common_subreddit(corpus, 3) == "r/aww");
  CHECK_THROWS_AS(kth_most_common_subreddit(corpus, 4), std::runtime_error);
}

namespace {

std::vector<AuthorEpisode> single_community_corpus(std::size_t n, const std::string& sub) {
  std::vector<AuthorEpisode> corpus;
  for (std::size_t a = 0; a < n; ++a) {
    corpus.push_back(testsupport::synthetic_episode("cfb" + std::to_string(a), 3, sub));
  }
  return corpus;
}

AuthorEpisode diverse_episode(const std::string& author, std::size_t distinct) {
  AuthorEpisode ep = testsupport::synthetic_episode(author, 11);
  for (std::size_t p = 0; p < ep.posts.size(); ++p) {
    ep.posts[p].subreddit = "r/sub" + std::to_string(p % distinct);
  }
  return ep;
}

}  // namespace

TEST_CASE("build_variant single keeps only the designated community") {
  auto corpus = single_community_corpus(40, "r/CFB");
  // Pollute with authors from elsewhere; they must never be selected.
  for (int a = 0; a < 10; ++a) {
    corpus.push_back(testsupport::synthetic_episode("other" + std::to_string(a), 5, "r/aww"));
  }
  VariantParams params;
  params.designated_community = "r/CFB";
  const auto v = build_variant(corpus, VariantKind::kSingle, 3, params);
  REQUIRE(v.sources.size() == 15);
  REQUIRE(v.targets.size() == 15);
  std::set<std::string> subs;
  std::size_t posts = 0;
  for (const auto* role : {&v.sources, &v.targets}) {
    for (const auto& ep : *role) {
      for (const auto& p : ep.posts) {
        subs.insert(p.subreddit);
        ++posts;
      }
    }
  }
  CHECK(subs == std::set<std::string>{"r/CFB"});
  CHECK(posts == 30 * kPostsPerEpisode);
}

TEST_CASE("build_variant diverse thresholds distinct communities") {
  CHECK(diverse_episode("x", 16).distinct_subreddits() == 16);
  CHECK(diverse_episode("x", 12).distinct_subreddits() == 12);

  std::vector<AuthorEpisode> corpus;
  for (int a = 0; a < 35; ++a) corpus.push_back(diverse_episode("d" + std::to_string(a), 16));
  for (int a = 0; a < 20; ++a) corpus.push_back(diverse_episode("n" + std::to_string(a), 4));
  VariantParams params;
  const auto v = build_variant(corpus, VariantKind::kDiverse, 5, params);
  for (const auto* role : {&v.sources, &v.targets}) {
    for (const auto& ep : *role) CHECK(ep.distinct_subreddits() >= 13);
  }
}

TEST_CASE("build_variant is deterministic and role-disjoint") {
  std::vector<AuthorEpisode> corpus;
  for (int a = 0; a < 50; ++a) {
    corpus.push_back(testsupport::synthetic_episode("r" + std::to_string(a), 9));
  }
  const auto v1 = build_variant(corpus, VariantKind::kRandom, 42, {});
  const auto v2 = build_variant(corpus, VariantKind::kRandom, 42, {});
  REQUIRE(v1.sources.size() == v2.sources.size());
  for (std::size_t i = 0; i < v1.sources.size(); ++i) {
    CHECK(v1.sources[i].author_id == v2.sources[i].author_id);
    CHECK(v1.targets[i].author_id == v2.targets[i].author_id);
  }
  std::set<std::string> ids;
  for (const auto* role : {&v1.sources, &v1.targets}) {
    for (const auto& ep : *role) ids.insert(ep.author_id);
  }
  CHECK(ids.size() == 30);

  const auto v3 = build_variant(corpus, VariantKind::kRandom, 43, {});
  bool any_difference = false;
  for (std::size_t i = 0; i < v1.sources.size(); ++i) {
    if (v1.sources[i].author_id != v3.sources[i].author_id) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("build_variant reports the failed filter when infeasible") {
  const auto corpus = single_community_corpus(10, "r/CFB");
  VariantParams params;
  params.designated_community = "r/CFB";
  CHECK_THROWS_WITH_AS(build_variant(corpus, VariantKind::kSingle, 1, params),
                       doctest::Contains("r/CFB"), std::runtime_error);
  CHECK_THROWS_WITH_AS(build_variant(corpus, VariantKind::kDiverse, 1, {}),
                       doctest::Contains("distinct"), std::runtime_error);
}

TEST_CASE("enumerate_pairs yields the full grid in order") {
  const auto v = testsupport::toy_variant(15);
  const auto pairs = enumerate_pairs(v);
  REQUIRE(pairs.size() == 225);
  CHECK(pairs[0].source.author_id == v.sources[0].author_id);
  CHECK(pairs[0].target.author_id == v.targets[0].author_id);
  CHECK(pairs[1].target.author_id == v.targets[1].author_id);
  CHECK(pairs[15].source.author_id == v.sources[1].author_id);
  for (const auto& p : pairs) CHECK(p.source.author_id != p.target.author_id);
}

TEST_CASE("enumerate_pairs rejects overlapping roles") {
  auto v = testsupport::toy_variant(2);
  v.targets[0] = v.sources[0];  // force a violation
  CHECK_THROWS_AS(enumerate_pairs(v), std::runtime_error);
}

TEST_CASE("variant file round-trips") {
  TempDir dir("variant");
  const auto v = testsupport::toy_variant(3);
  const auto file = dir.path() / "variant.json";
  save_variant(v, file);
  const auto loaded = load_variant(file);
  CHECK(loaded.kind == v.kind);
  CHECK(loaded.seed == v.seed);
  CHECK(loaded.params.per_role == 3);
  REQUIRE(loaded.sources.size() == 3);
  CHECK(loaded.sources[0].posts[0].text == v.sources[0].posts[0].text);
  CHECK(loaded.targets[2].author_id == v.targets[2].author_id);
}

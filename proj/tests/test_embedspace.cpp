#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string_view>

#include "styll/embedspace.hpp"
#include "support.hpp"

using namespace styll;

namespace {

std::vector<std::string> posts16(const std::string& stem) {
  std::vector<std::string> posts;
  for (int i = 0; i < 16; ++i) posts.push_back(stem + " post " + std::to_string(i));
  return posts;
}

/// Independent restatement of the documented mock scheme: FNV-1a 64 over
/// every byte trigram, low bit is the sign, remaining bits the bucket.
EmbeddingVector oracle_ngram_embedding(const std::vector<std::string>& posts,
                                       Eigen::Index dim) {
  EmbeddingVector acc = EmbeddingVector::Zero(dim);
  auto fnv = [](std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
      h = (h ^ c) * 1099511628211ULL;
    }
    return h;
  };
  for (const auto& post : posts) {
    const std::string_view sv = post;
    if (sv.size() < 3) {
      const auto h = fnv(sv);
      acc[static_cast<Eigen::Index>((h >> 1) % static_cast<std::uint64_t>(dim))] +=
          (h & 1) ? 1.0 : -1.0;
      continue;
    }
    for (std::size_t i = 0; i + 3 <= sv.size(); ++i) {
      const auto h = fnv(sv.substr(i, 3));
      acc[static_cast<Eigen::Index>((h >> 1) % static_cast<std::uint64_t>(dim))] +=
          (h & 1) ? 1.0 : -1.0;
    }
  }
  return acc / acc.norm();
}

}  // namespace

TEST_CASE("mock space is deterministic and unit norm") {
  const MockNgramSpace space;
  const auto posts = posts16("alpha");
  const EmbeddingVector a = embed_episode(space, posts);
  const EmbeddingVector b = embed_episode(space, posts);
  CHECK((a - b).norm() == 0.0);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mock space matches its documented hashing scheme") {
  const MockNgramSpace space(64);
  const auto posts = posts16("gamma delta");
  const EmbeddingVector got = embed_episode(space, posts);
  const EmbeddingVector want = oracle_ngram_embedding(posts, 64);
  CHECK((got - want).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("disjoint-vocabulary episodes are far apart in the mock space") {
  const MockNgramSpace space;
  const EmbeddingVector a = embed_episode(space, posts16("qqqq wwww eeee"));
  const EmbeddingVector b = embed_episode(space, posts16("zzzz xxxx vvvv"));
  CHECK(a.dot(b) < 0.5);
}

TEST_CASE("per-text pooling: identical posts equal the single-post vector") {
  const MockNgramSpace space(128, /*set_native=*/false, "mock-post");
  std::vector<std::string> posts(16, "the same exact post");
  const EmbeddingVector pooled = embed_episode(space, posts);
  EmbeddingVector single = space.embed_text(posts[0]);
  single /= single.norm();
  CHECK((pooled - single).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("embed_episode validates its inputs") {
  const MockNgramSpace space;
  CHECK_THROWS_AS(embed_episode(space, std::vector<std::string>{}), std::invalid_argument);
  std::vector<std::string> with_empty = posts16("x");
  with_empty[7] = "   ";
  CHECK_THROWS_AS(embed_episode(space, with_empty), std::invalid_argument);
}

TEST_CASE("mock scorer is a token-overlap F1") {
  const MockOverlapScorer scorer;
  CHECK(scorer.score("a b c", "a b c") == doctest::Approx(1.0));
  CHECK(scorer.score("a b", "c d") == doctest::Approx(0.0));
  // Hand computation: tokens {the,big,dog} vs {the,dog,ran,home}:
  // overlap 2, F1 = 2*2/(3+4).
  CHECK(scorer.score("The big dog", "the dog ran home") == doctest::Approx(4.0 / 7.0));
  CHECK(scorer.score("x y", "y x") == doctest::Approx(scorer.score("y x", "x y")));
}

TEST_CASE("mis_set aligned and cross modes") {
  const MockOverlapScorer scorer;
  const std::vector<std::string> a = {"one two", "three four"};
  const std::vector<std::string> b = {"one two", "five six", "three four"};

  SUBCASE("aligned requires equal sizes") {
    CHECK_THROWS_AS(mis_set(scorer, a, b, MisMode::kAligned), std::invalid_argument);
    CHECK(mis_set(scorer, a, a, MisMode::kAligned) == doctest::Approx(1.0));
  }
  SUBCASE("cross averages all six pairs") {
    // Hand computation of each overlap F1, all posts are two tokens:
    // (a0,b0)=1, (a0,b1)=0, (a0,b2)=0, (a1,b0)=0, (a1,b1)=0, (a1,b2)=1.
    CHECK(mis_set(scorer, a, b, MisMode::kCross) == doctest::Approx(2.0 / 6.0));
  }
  SUBCASE("empty sets are an error") {
    CHECK_THROWS_AS(mis_set(scorer, {}, b, MisMode::kCross), std::invalid_argument);
  }
}

TEST_CASE("embedding records round-trip through the cache file") {
  testsupport::TempDir dir("embed");
  const MockNgramSpace space(32);
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 5; ++i) {
    records.push_back({"author" + std::to_string(i), space.name(),
                       embed_episode(space, posts16("stem" + std::to_string(i)))});
  }
  const auto path = dir.path() / "embeddings.jsonl";
  save_embeddings(records, path);
  const auto loaded = load_embeddings(path);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].id == records[i].id);
    CHECK(loaded[i].space == records[i].space);
    CHECK((loaded[i].values - records[i].values).norm() == 0.0);  // full-precision JSON
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "styll/metrics.hpp"
#include "styll/rng.hpp"
#include "styll/textops.hpp"
#include "support.hpp"

using namespace styll;

namespace {

EmbeddingVector unit2(double x, double y) {
  EmbeddingVector v(2);
  v << x, y;
  return v / v.norm();
}

EmbeddingVector random_unit(SeededRng& rng, Eigen::Index dim) {
  EmbeddingVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    // Box-Muller from two uniform draws.
    const double u1 = std::max(rng.unit(), 1e-12);
    const double u2 = rng.unit();
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  return v / v.norm();
}

}  // namespace

TEST_CASE("scaled similarity closed forms") {
  const EmbeddingVector e1 = unit2(1, 0);
  const EmbeddingVector e2 = unit2(0, 1);
  CHECK(scaled_similarity(e1, e1) == doctest::Approx(1.0).epsilon(1e-12));
  // Orthogonal: angle pi/2 -> sim 0.5 -> S 0.75, S_c 0.25.
  CHECK(scaled_similarity(e1, e2) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(similarity_complement(e1, e2) == doctest::Approx(0.25).epsilon(1e-12));
  // Antipodal: angle pi -> sim 0 -> S 0.5.
  CHECK(scaled_similarity(e1, EmbeddingVector(-e1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaled similarity rejects zero vectors and survives drift") {
  EmbeddingVector zero = EmbeddingVector::Zero(3);
  const EmbeddingVector e1 = unit2(1, 0);
  CHECK_THROWS_AS(scaled_similarity(zero, zero), std::invalid_argument);
  // Near-parallel vectors whose cosine exceeds 1 in floating point.
  EmbeddingVector a(3), b(3);
  a << 0.577350269189625842, 0.577350269189625842, 0.577350269189625842;
  b = a * (1.0 + 1e-16);
  const double s = scaled_similarity(a, b);
  CHECK(std::isfinite(s));
  CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("away and towards on the worked 2-D example") {
  // R_s = (1,0), R_t = (0,1), R_st on the diagonal. Angles: (R_st,R_s) =
  // pi/4 -> S = 0.875, S_c = 0.125; (R_t,R_s) = pi/2 -> S = 0.75, S_c = 0.25.
  const EmbeddingVector r_s = unit2(1, 0);
  const EmbeddingVector r_t = unit2(0, 1);
  const EmbeddingVector r_st = unit2(std::sqrt(2.0) / 2, std::sqrt(2.0) / 2);

  const auto away = away_score(r_st, r_s, r_t);
  REQUIRE(away.has_value());
  CHECK(*away == doctest::Approx(0.5).epsilon(1e-9));  // min(0.125, 0.25) / 0.25

  const auto towards = towards_score(r_st, r_s, r_t);
  REQUIRE(towards.has_value());
  CHECK(*towards == doctest::Approx(0.5).epsilon(1e-9));  // (0.875 - 0.75) / 0.25

  // Same-angle tie: S(R_st,R_t) == S(R_st,R_s) == 0.875, strict > is false.
  CHECK_FALSE(confusion_indicator(r_st, r_s, r_t));
}

TEST_CASE("away extremes") {
  SeededRng rng(11);
  const EmbeddingVector r_s = random_unit(rng, 8);
  const EmbeddingVector r_t = random_unit(rng, 8);
  CHECK(*away_score(r_s, r_s, r_t) == doctest::Approx(0.0));
  CHECK(*away_score(r_t, r_s, r_t) == doctest::Approx(1.0));
  // Coincident source and target embeddings are degenerate.
  CHECK_FALSE(away_score(r_s, r_t, r_t).has_value());
}

TEST_CASE("towards extremes") {
  SeededRng rng(12);
  const EmbeddingVector r_s = random_unit(rng, 8);
  const EmbeddingVector r_t = random_unit(rng, 8);
  CHECK(*towards_score(r_t, r_s, r_t) == doctest::Approx(1.0));
  CHECK(*towards_score(r_s, r_s, r_t) == doctest::Approx(0.0));
  CHECK_FALSE(towards_score(r_s, r_t, r_t).has_value());
}

TEST_CASE("sim_score arithmetic") {
  CHECK(*sim_score(0.7, 0.4) == doctest::Approx(0.5).epsilon(1e-12));  // 0.3 / 0.6
  CHECK(*sim_score(1.0, 0.3) == doctest::Approx(1.0));
  CHECK(*sim_score(0.2, 0.5) == doctest::Approx(0.0));
  CHECK_FALSE(sim_score(0.9, 1.0).has_value());
  CHECK_FALSE(sim_score(0.9, 1.0 - 1e-9).has_value());
}

TEST_CASE("joint_score nested geometric mean") {
  // (0.25)^(1/4) * (0.5)^(1/2) = 0.7071... * 0.7071... = 0.5
  CHECK(joint_score(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(joint_score(0.0, 0.9, 0.9) == doctest::Approx(0.0));
  CHECK(joint_score(0.9, 0.0, 0.9) == doctest::Approx(0.0));
  CHECK(joint_score(0.9, 0.9, 0.0) == doctest::Approx(0.0));
  CHECK(joint_score(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  // Equals (a*t)^(1/4) * s^(1/2) and is symmetric in away/towards.
  CHECK(joint_score(0.3, 0.8, 0.6) ==
        doctest::Approx(std::pow(0.3 * 0.8, 0.25) * std::sqrt(0.6)).epsilon(1e-12));
  CHECK(joint_score(0.3, 0.8, 0.6) == doctest::Approx(joint_score(0.8, 0.3, 0.6)));
}

TEST_CASE("metric ranges over random unit triples") {
  SeededRng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(14));
    const EmbeddingVector r_st = random_unit(rng, dim);
    const EmbeddingVector r_s = random_unit(rng, dim);
    const EmbeddingVector r_t = random_unit(rng, dim);
    const auto a = away_score(r_st, r_s, r_t);
    const auto t = towards_score(r_st, r_s, r_t);
    if (a) {
      CHECK(*a >= 0.0);
      CHECK(*a <= 1.0);
    }
    if (t) {
      CHECK(*t >= 0.0);
      CHECK(*t <= 1.0);
    }
    if (a && t) {
      const double j = joint_score(*a, *t, 0.5);
      CHECK(j >= 0.0);
      CHECK(j <= 1.0);
    }
    const double s1 = scaled_similarity(r_s, r_t);
    const double s2 = scaled_similarity(r_t, r_s);
    CHECK(s1 == s2);  // bitwise symmetric
  }
}

TEST_CASE("scaled similarity is strictly decreasing in angle") {
  SeededRng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingVector u = random_unit(rng, 6);
    // Orthonormal partner via Gram-Schmidt.
    EmbeddingVector w = random_unit(rng, 6);
    w -= w.dot(u) * u;
    if (w.norm() < 1e-8) continue;
    w.normalize();
    const double theta1 = rng.unit() * std::numbers::pi;
    const double theta2 = rng.unit() * std::numbers::pi;
    if (std::abs(theta1 - theta2) < 1e-9) continue;
    const EmbeddingVector v1 = std::cos(theta1) * u + std::sin(theta1) * w;
    const EmbeddingVector v2 = std::cos(theta2) * u + std::sin(theta2) * w;
    const bool smaller_angle = theta1 < theta2;
    CHECK(smaller_angle == (scaled_similarity(u, v1) > scaled_similarity(u, v2)));
  }
}

namespace {

VariantReport score_method(const DatasetVariant& variant, const std::string& method) {
  std::vector<TransferResult> results;
  for (const auto& pair : enumerate_pairs(variant)) {
    results.push_back(method == methods::kCopySrc ? copy_src(pair) : copy_tgt(pair));
  }
  const MockNgramSpace space;
  const MockOverlapScorer scorer;
  return score_variant(variant, results, space, scorer);
}

}  // namespace

TEST_CASE("copy-src scores the identity extremes") {
  const auto variant = testsupport::toy_variant(3);
  const auto report = score_method(variant, methods::kCopySrc);
  REQUIRE(report.pairs.size() == 9);
  CHECK(report.degenerate_count == 0);
  CHECK(report.mean_away == doctest::Approx(0.0));
  CHECK(report.mean_towards == doctest::Approx(0.0));
  CHECK(report.mean_joint == doctest::Approx(0.0));
  CHECK(report.mean_sim == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.confusion == doctest::Approx(0.0));
}

TEST_CASE("copy-tgt scores the identity extremes") {
  const auto variant = testsupport::toy_variant(3);
  const auto report = score_method(variant, methods::kCopyTgt);
  CHECK(report.mean_away == doctest::Approx(1.0));
  CHECK(report.mean_towards == doctest::Approx(1.0));
  CHECK(report.mean_sim == doctest::Approx(0.0));
  CHECK(report.mean_joint == doctest::Approx(0.0));
  CHECK(report.confusion == doctest::Approx(1.0));
}

TEST_CASE("score_variant flags missing pairs and proceeds") {
  const auto variant = testsupport::toy_variant(2);
  auto pairs = enumerate_pairs(variant);
  std::vector<TransferResult> results;
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) results.push_back(copy_src(pairs[i]));
  const MockNgramSpace space;
  const MockOverlapScorer scorer;
  const auto report = score_variant(variant, results, space, scorer);
  CHECK(report.incomplete());
  REQUIRE(report.missing.size() == 1);
  CHECK(report.missing[0] == pairs.back().source.author_id + "->" +
                                 pairs.back().target.author_id);
  CHECK(report.pairs.size() == 3);
  CHECK(report.expected_pairs == 4);
}

TEST_CASE("score_variant matches a hand-computed two-pair fixture") {
  // Two sources, one target, trivially small posts; every quantity below is
  // recomputed here from the formula primitives as an independent check on
  // the aggregation path.
  DatasetVariant variant;
  variant.params.per_role = 1;
  variant.sources.push_back(testsupport::synthetic_episode("sA", 1));
  variant.targets.push_back(testsupport::synthetic_episode("tB", 2));
  const auto pairs = enumerate_pairs(variant);
  REQUIRE(pairs.size() == 1);

  TransferResult result = copy_src(pairs[0]);
  result.outputs[0] = pairs[0].target.posts[0].text;  // nudge towards the target
  result.outputs[5] = pairs[0].target.posts[5].text;

  const MockNgramSpace space;
  const MockOverlapScorer scorer;
  const auto report = score_variant(variant, std::vector<TransferResult>{result}, space,
                                    scorer, MisMode::kAligned);
  REQUIRE(report.pairs.size() == 1);
  REQUIRE_FALSE(report.pairs[0].degenerate);

  const auto src_posts = pairs[0].source.post_texts();
  const auto tgt_posts = pairs[0].target.post_texts();
  const EmbeddingVector r_s = embed_episode(space, src_posts);
  const EmbeddingVector r_t = embed_episode(space, tgt_posts);
  const EmbeddingVector r_st = embed_episode(space, result.outputs);
  const double expect_away =
      std::min(similarity_complement(r_st, r_s), similarity_complement(r_t, r_s)) /
      similarity_complement(r_t, r_s);
  const double gain = scaled_similarity(r_st, r_t) - scaled_similarity(r_s, r_t);
  const double expect_towards = std::max(gain, 0.0) / similarity_complement(r_s, r_t);
  const double mis_st_s = mis_set(scorer, result.outputs, src_posts, MisMode::kAligned);
  const double mis_t_s = mis_set(scorer, tgt_posts, src_posts, MisMode::kAligned);
  const double expect_sim = std::max(mis_st_s - mis_t_s, 0.0) / (1.0 - mis_t_s);

  CHECK(report.pairs[0].away == doctest::Approx(expect_away).epsilon(1e-12));
  CHECK(report.pairs[0].towards == doctest::Approx(expect_towards).epsilon(1e-12));
  CHECK(report.pairs[0].sim == doctest::Approx(expect_sim).epsilon(1e-12));
  CHECK(report.pairs[0].joint ==
        doctest::Approx(joint_score(expect_away, expect_towards, expect_sim)).epsilon(1e-12));
  CHECK(report.mean_away == doctest::Approx(expect_away));
}

TEST_CASE("variant report round-trips through its file form") {
  testsupport::TempDir dir("report");
  const auto variant = testsupport::toy_variant(2);
  const auto report = score_method(variant, methods::kCopyTgt);
  const auto path = dir.path() / "report.json";
  save_variant_report(report, path);
  const auto loaded = load_variant_report(path);
  CHECK(loaded.method == report.method);
  CHECK(loaded.space == report.space);
  CHECK(loaded.mean_away == report.mean_away);          // bit-exact
  CHECK(loaded.mean_joint == report.mean_joint);        // bit-exact
  CHECK(loaded.confusion == report.confusion);
  REQUIRE(loaded.pairs.size() == report.pairs.size());
  CHECK(loaded.pairs[0].away == report.pairs[0].away);
}

TEST_CASE("degenerate pairs are excluded from aggregates but counted for confusion") {
  DatasetVariant variant;
  variant.params.per_role = 1;
  // Identical source and target posts force S_c(R_t, R_s) = 0.
  const auto ep = testsupport::synthetic_episode("same", 3);
  auto src = ep;
  src.author_id = "srcX";
  auto tgt = ep;
  tgt.author_id = "tgtX";
  variant.sources.push_back(src);
  variant.targets.push_back(tgt);

  std::vector<TransferResult> results{copy_src(enumerate_pairs(variant)[0])};
  const MockNgramSpace space;
  const MockOverlapScorer scorer;
  const auto report = score_variant(variant, results, space, scorer);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].degenerate);
  CHECK(report.degenerate_count == 1);
  CHECK(report.mean_away == doctest::Approx(0.0));  // no non-degenerate pairs
  CHECK_FALSE(report.pairs[0].confused);            // tie -> false, still defined
}

#include "styll/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace styll {

using nlohmann::json;

std::optional<double> away_score(const Eigen::Ref<const EmbeddingVector>& r_st,
                                 const Eigen::Ref<const EmbeddingVector>& r_s,
                                 const Eigen::Ref<const EmbeddingVector>& r_t, double eps) {
  const double denom = similarity_complement(r_t, r_s);
  if (denom < eps) return std::nullopt;
  return std::min(similarity_complement(r_st, r_s), denom) / denom;
}

std::optional<double> towards_score(const Eigen::Ref<const EmbeddingVector>& r_st,
                                    const Eigen::Ref<const EmbeddingVector>& r_s,
                                    const Eigen::Ref<const EmbeddingVector>& r_t, double eps) {
  const double denom = similarity_complement(r_s, r_t);
  if (denom < eps) return std::nullopt;
  const double gain = scaled_similarity(r_st, r_t) - scaled_similarity(r_s, r_t);
  return std::max(gain, 0.0) / denom;
}

std::optional<double> sim_score(double mis_st_s, double mis_t_s, double eps) {
  const double denom = 1.0 - mis_t_s;
  if (denom < eps) return std::nullopt;
  return std::max(mis_st_s - mis_t_s, 0.0) / denom;
}

double joint_score(double away, double towards, double sim) {
  return std::sqrt(std::sqrt(away * towards) * sim);
}

bool confusion_indicator(const Eigen::Ref<const EmbeddingVector>& r_st,
                         const Eigen::Ref<const EmbeddingVector>& r_s,
                         const Eigen::Ref<const EmbeddingVector>& r_t) {
  return scaled_similarity(r_st, r_t) > scaled_similarity(r_st, r_s);
}

VariantReport score_variant(const DatasetVariant& variant,
                            std::span<const TransferResult> results,
                            const AuthorshipSpace& space, const SemanticScorer& scorer,
                            MisMode baseline_mode) {
  VariantReport report;
  report.space = space.name();
  report.mis_baseline_mode = to_string(baseline_mode);
  report.expected_pairs = variant.sources.size() * variant.targets.size();
  if (!results.empty()) report.method = results.front().method;
  for (const auto& r : results) {
    if (r.method != report.method) {
      throw std::invalid_argument("score_variant: mixed methods " + report.method + " and " +
                                  r.method);
    }
  }

  // Author episode embeddings are shared by every pair touching the author.
  std::map<std::string, EmbeddingVector> author_embedding;
  auto episode_embedding = [&](const AuthorEpisode& ep) -> const EmbeddingVector& {
    auto it = author_embedding.find(ep.author_id);
    if (it == author_embedding.end()) {
      it = author_embedding.emplace(ep.author_id, embed_episode(space, ep.post_texts())).first;
    }
    return it->second;
  };

  std::set<std::pair<std::string, std::string>> seen;
  double sum_away = 0, sum_towards = 0, sum_sim = 0, sum_joint = 0;
  std::size_t confused_count = 0;

  for (const auto& r : results) {
    seen.emplace(r.pair.source.author_id, r.pair.target.author_id);
    const EmbeddingVector& r_s = episode_embedding(r.pair.source);
    const EmbeddingVector& r_t = episode_embedding(r.pair.target);
    const EmbeddingVector r_st = embed_episode(space, r.outputs);

    PairScore score;
    score.source_author = r.pair.source.author_id;
    score.target_author = r.pair.target.author_id;
    score.confused = confusion_indicator(r_st, r_s, r_t);
    if (score.confused) ++confused_count;

    const auto source_posts = r.pair.source.post_texts();
    const auto target_posts = r.pair.target.post_texts();
    const double mis_st_s = mis_set(scorer, r.outputs, source_posts, MisMode::kAligned);
    const double mis_t_s = mis_set(scorer, target_posts, source_posts, baseline_mode);

    const auto a = away_score(r_st, r_s, r_t);
    const auto t = towards_score(r_st, r_s, r_t);
    const auto s = sim_score(mis_st_s, mis_t_s);
    if (a && t && s) {
      score.away = *a;
      score.towards = *t;
      score.sim = *s;
      score.joint = joint_score(*a, *t, *s);
      sum_away += score.away;
      sum_towards += score.towards;
      sum_sim += score.sim;
      sum_joint += score.joint;
    } else {
      score.degenerate = true;
      ++report.degenerate_count;
    }
    report.pairs.push_back(std::move(score));
  }

  for (const auto& s : variant.sources) {
    for (const auto& t : variant.targets) {
      if (!seen.count({s.author_id, t.author_id})) {
        report.missing.push_back(s.author_id + "->" + t.author_id);
      }
    }
  }

  const std::size_t scored = report.pairs.size();
  const std::size_t clean = scored - report.degenerate_count;
  if (clean > 0) {
    report.mean_away = sum_away / static_cast<double>(clean);
    report.mean_towards = sum_towards / static_cast<double>(clean);
    report.mean_sim = sum_sim / static_cast<double>(clean);
    report.mean_joint = sum_joint / static_cast<double>(clean);
  }
  if (scored > 0) {
    report.confusion = static_cast<double>(confused_count) / static_cast<double>(scored);
  }
  return report;
}

void save_variant_report(const VariantReport& report, const std::filesystem::path& path) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    json pj = {{"source", p.source_author},
               {"target", p.target_author},
               {"confused", p.confused},
               {"degenerate", p.degenerate}};
    if (!p.degenerate) {
      pj["away"] = p.away;
      pj["towards"] = p.towards;
      pj["sim"] = p.sim;
      pj["joint"] = p.joint;
    }
    pairs.push_back(std::move(pj));
  }
  json j;
  j["method"] = report.method;
  j["space"] = report.space;
  j["mis_baseline_mode"] = report.mis_baseline_mode;
  j["expected_pairs"] = report.expected_pairs;
  j["missing"] = report.missing;
  j["degenerate_count"] = report.degenerate_count;
  j["aggregates"] = {{"away", report.mean_away},
                     {"towards", report.mean_towards},
                     {"confusion", report.confusion},
                     {"sim", report.mean_sim},
                     {"joint", report.mean_joint}};
  j["pairs"] = std::move(pairs);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path.string());
  out << j.dump(2) << "\n";
}

VariantReport load_variant_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file: " + path.string());
  json j = json::parse(in);
  VariantReport r;
  r.method = j.at("method").get<std::string>();
  r.space = j.at("space").get<std::string>();
  r.mis_baseline_mode = j.at("mis_baseline_mode").get<std::string>();
  r.expected_pairs = j.at("expected_pairs").get<std::size_t>();
  r.missing = j.at("missing").get<std::vector<std::string>>();
  r.degenerate_count = j.at("degenerate_count").get<std::size_t>();
  const auto& agg = j.at("aggregates");
  r.mean_away = agg.at("away").get<double>();
  r.mean_towards = agg.at("towards").get<double>();
  r.confusion = agg.at("confusion").get<double>();
  r.mean_sim = agg.at("sim").get<double>();
  r.mean_joint = agg.at("joint").get<double>();
  for (const auto& pj : j.at("pairs")) {
    PairScore p;
    p.source_author = pj.at("source").get<std::string>();
    p.target_author = pj.at("target").get<std::string>();
    p.confused = pj.at("confused").get<bool>();
    p.degenerate = pj.at("degenerate").get<bool>();
    if (!p.degenerate) {
      p.away = pj.at("away").get<double>();
      p.towards = pj.at("towards").get<double>();
      p.sim = pj.at("sim").get<double>();
      p.joint = pj.at("joint").get<double>();
    }
    r.pairs.push_back(std::move(p));
  }
  return r;
}

}  // namespace styll

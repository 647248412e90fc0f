#include "styll/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "styll/rng.hpp"
#include "styll/text.hpp"

namespace styll {

using nlohmann::json;

std::vector<std::string> AuthorEpisode::post_texts() const {
  std::vector<std::string> out;
  out.reserve(posts.size());
  for (const auto& p : posts) out.push_back(p.text);
  return out;
}

std::size_t AuthorEpisode::distinct_subreddits() const {
  std::set<std::string> subs;
  for (const auto& p : posts) subs.insert(p.subreddit);
  return subs.size();
}

std::string to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::kRandom: return "random";
    case VariantKind::kSingle: return "single";
    case VariantKind::kDiverse: return "diverse";
  }
  return "random";
}

VariantKind variant_kind_from_string(const std::string& s) {
  if (s == "random") return VariantKind::kRandom;
  if (s == "single") return VariantKind::kSingle;
  if (s == "diverse") return VariantKind::kDiverse;
  throw std::invalid_argument("unknown variant kind: " + s);
}

namespace {

Post parse_post(const json& j, std::size_t line_no) {
  Post p;
  try {
    p.post_id = j.at("post_id").get<std::string>();
    p.author_id = j.at("author_id").get<std::string>();
    p.subreddit = j.at("subreddit").get<std::string>();
    p.text = j.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error("corpus line " + std::to_string(line_no) +
                             ": missing or mistyped field (" + e.what() + ")");
  }
  if (text::trim(p.text).empty()) {
    throw std::runtime_error("corpus line " + std::to_string(line_no) + ": empty post text");
  }
  return p;
}

}  // namespace

std::vector<AuthorEpisode> load_corpus(const std::filesystem::path& path,
                                       std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

  // Posts grouped by author, authors kept in first-seen file order.
  std::vector<std::string> author_order;
  std::unordered_map<std::string, std::vector<Post>> by_author;
  std::unordered_set<std::string> seen_post_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) + ": invalid record (" +
                               e.what() + ")");
    }
    Post p = parse_post(j, line_no);
    if (!seen_post_ids.insert(p.post_id).second) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) +
                               ": duplicate post_id " + p.post_id);
    }
    auto [it, inserted] = by_author.try_emplace(p.author_id);
    if (inserted) author_order.push_back(p.author_id);
    it->second.push_back(std::move(p));
  }

  std::vector<AuthorEpisode> episodes;
  for (const auto& author : author_order) {
    auto& posts = by_author[author];
    if (posts.size() < kPostsPerEpisode) {
      if (warnings) {
        warnings->push_back("author " + author + " has only " + std::to_string(posts.size()) +
                            " posts; skipped");
      }
      continue;
    }
    AuthorEpisode ep;
    ep.author_id = author;
    ep.posts.assign(posts.begin(), posts.begin() + kPostsPerEpisode);
    episodes.push_back(std::move(ep));
  }
  if (episodes.empty()) {
    throw std::runtime_error("corpus " + path.string() + " contains no author with at least " +
                             std::to_string(kPostsPerEpisode) + " posts");
  }
  return episodes;
}

std::string kth_most_common_subreddit(const std::vector<AuthorEpisode>& corpus, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k is 1-based");
  std::map<std::string, std::size_t> counts;
  for (const auto& ep : corpus) {
    for (const auto& p : ep.posts) ++counts[p.subreddit];
  }
  if (counts.size() < k) {
    throw std::runtime_error("corpus has only " + std::to_string(counts.size()) +
                             " distinct subreddits, requested rank " + std::to_string(k));
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked[k - 1].first;
}

namespace {

bool qualifies(const AuthorEpisode& ep, VariantKind kind, const VariantParams& params) {
  switch (kind) {
    case VariantKind::kRandom:
      return true;
    case VariantKind::kSingle:
      return std::all_of(ep.posts.begin(), ep.posts.end(), [&](const Post& p) {
        return p.subreddit == params.designated_community;
      });
    case VariantKind::kDiverse:
      return ep.distinct_subreddits() >= params.min_distinct;
  }
  return false;
}

void validate_variant(const DatasetVariant& v) {
  if (v.sources.size() != v.params.per_role || v.targets.size() != v.params.per_role) {
    throw std::runtime_error("variant must have exactly " + std::to_string(v.params.per_role) +
                             " sources and targets");
  }
  std::set<std::string> ids;
  for (const auto& ep : v.sources) ids.insert(ep.author_id);
  for (const auto& ep : v.targets) ids.insert(ep.author_id);
  if (ids.size() != 2 * v.params.per_role) {
    throw std::runtime_error("variant author sets overlap or contain duplicates");
  }
  for (const auto* role : {&v.sources, &v.targets}) {
    for (const auto& ep : *role) {
      if (ep.posts.size() != kPostsPerEpisode) {
        throw std::runtime_error("episode " + ep.author_id + " does not have " +
                                 std::to_string(kPostsPerEpisode) + " posts");
      }
      if (!qualifies(ep, v.kind, v.params)) {
        throw std::runtime_error("episode " + ep.author_id + " violates the " +
                                 to_string(v.kind) + " variant filter");
      }
    }
  }
}

}  // namespace

DatasetVariant build_variant(const std::vector<AuthorEpisode>& corpus, VariantKind kind,
                             std::uint64_t seed, const VariantParams& params) {
  if (kind == VariantKind::kSingle && params.designated_community.empty()) {
    throw std::invalid_argument("single variant requires a designated community");
  }
  std::vector<std::size_t> qualifying;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (qualifies(corpus[i], kind, params)) qualifying.push_back(i);
  }
  const std::size_t need = 2 * params.per_role;
  if (qualifying.size() < need) {
    std::string filter = kind == VariantKind::kSingle
                             ? "all posts in " + params.designated_community
                             : kind == VariantKind::kDiverse
                                   ? ">= " + std::to_string(params.min_distinct) +
                                         " distinct subreddits"
                                   : "none";
    throw std::runtime_error("infeasible " + to_string(kind) + " variant: " +
                             std::to_string(qualifying.size()) + " qualifying episodes (need " +
                             std::to_string(need) + "; filter: " + filter + ")");
  }

  SeededRng rng(seed);
  std::vector<std::size_t> picks = rng.sample_indices(qualifying.size(), need);

  DatasetVariant v;
  v.kind = kind;
  v.seed = seed;
  v.params = params;
  for (std::size_t i = 0; i < params.per_role; ++i) {
    v.sources.push_back(corpus[qualifying[picks[i]]]);
  }
  for (std::size_t i = params.per_role; i < need; ++i) {
    v.targets.push_back(corpus[qualifying[picks[i]]]);
  }
  validate_variant(v);
  return v;
}

std::vector<TransferPair> enumerate_pairs(const DatasetVariant& variant) {
  validate_variant(variant);
  std::vector<TransferPair> pairs;
  pairs.reserve(variant.sources.size() * variant.targets.size());
  for (const auto& s : variant.sources) {
    for (const auto& t : variant.targets) {
      pairs.push_back(TransferPair{s, t});
    }
  }
  return pairs;
}

namespace {

json episode_to_json(const AuthorEpisode& ep) {
  json posts = json::array();
  for (const auto& p : ep.posts) {
    posts.push_back({{"post_id", p.post_id},
                     {"author_id", p.author_id},
                     {"subreddit", p.subreddit},
                     {"text", p.text}});
  }
  return {{"author_id", ep.author_id}, {"posts", std::move(posts)}};
}

AuthorEpisode episode_from_json(const json& j) {
  AuthorEpisode ep;
  ep.author_id = j.at("author_id").get<std::string>();
  for (const auto& pj : j.at("posts")) {
    Post p;
    p.post_id = pj.at("post_id").get<std::string>();
    p.author_id = pj.at("author_id").get<std::string>();
    p.subreddit = pj.at("subreddit").get<std::string>();
    p.text = pj.at("text").get<std::string>();
    ep.posts.push_back(std::move(p));
  }
  return ep;
}

}  // namespace

void save_variant(const DatasetVariant& variant, const std::filesystem::path& path) {
  validate_variant(variant);
  json j;
  j["kind"] = to_string(variant.kind);
  j["seed"] = variant.seed;
  j["params"] = {{"per_role", variant.params.per_role},
                 {"designated_community", variant.params.designated_community},
                 {"min_distinct", variant.params.min_distinct}};
  j["sources"] = json::array();
  j["targets"] = json::array();
  for (const auto& ep : variant.sources) j["sources"].push_back(episode_to_json(ep));
  for (const auto& ep : variant.targets) j["targets"].push_back(episode_to_json(ep));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write variant file: " + path.string());
  out << j.dump(2) << "\n";
}

DatasetVariant load_variant(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open variant file: " + path.string());
  json j = json::parse(in);
  DatasetVariant v;
  v.kind = variant_kind_from_string(j.at("kind").get<std::string>());
  v.seed = j.at("seed").get<std::uint64_t>();
  const auto& p = j.at("params");
  v.params.per_role = p.at("per_role").get<std::size_t>();
  v.params.designated_community = p.at("designated_community").get<std::string>();
  v.params.min_distinct = p.at("min_distinct").get<std::size_t>();
  for (const auto& ej : j.at("sources")) v.sources.push_back(episode_from_json(ej));
  for (const auto& ej : j.at("targets")) v.targets.push_back(episode_from_json(ej));
  validate_variant(v);
  return v;
}

}  // namespace styll

#include "styll/transfer.hpp"

#include <fstream>
#include <stdexcept>

namespace styll {

using nlohmann::json;

namespace {

json trace_to_json(const TransferTrace& t) {
  json posts = json::array();
  for (const auto& p : t.posts) {
    posts.push_back({{"source_paraphrase", p.source_paraphrase},
                     {"full_prompt", p.full_prompt},
                     {"paraphrase_fallback", p.paraphrase_fallback},
                     {"transfer_fallback", p.transfer_fallback},
                     {"dropped_demos", p.dropped_demos},
                     {"error", p.error}});
  }
  return {{"target_paraphrases", t.target_paraphrases},
          {"descriptors", t.descriptors},
          {"descriptors_defaulted", t.descriptors_defaulted},
          {"posts", std::move(posts)}};
}

TransferTrace trace_from_json(const json& j) {
  TransferTrace t;
  t.target_paraphrases = j.at("target_paraphrases").get<std::vector<std::string>>();
  t.descriptors = j.at("descriptors").get<std::vector<std::string>>();
  t.descriptors_defaulted = j.at("descriptors_defaulted").get<bool>();
  for (const auto& pj : j.at("posts")) {
    PostTrace p;
    p.source_paraphrase = pj.at("source_paraphrase").get<std::string>();
    p.full_prompt = pj.at("full_prompt").get<std::string>();
    p.paraphrase_fallback = pj.at("paraphrase_fallback").get<bool>();
    p.transfer_fallback = pj.at("transfer_fallback").get<bool>();
    p.dropped_demos = pj.at("dropped_demos").get<int>();
    p.error = pj.at("error").get<std::string>();
    t.posts.push_back(std::move(p));
  }
  return t;
}

}  // namespace

void save_transfer_result(const TransferResult& result, const std::filesystem::path& path) {
  if (result.outputs.size() != kPostsPerEpisode) {
    throw std::runtime_error("transfer result for " + result.pair.source.author_id + "->" +
                             result.pair.target.author_id + " has " +
                             std::to_string(result.outputs.size()) + " outputs, expected " +
                             std::to_string(kPostsPerEpisode));
  }
  json j;
  j["source_author"] = result.pair.source.author_id;
  j["target_author"] = result.pair.target.author_id;
  j["method"] = result.method;
  j["outputs"] = result.outputs;
  j["trace"] = trace_to_json(result.trace);
  j["config"] = result.config;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write result file: " + path.string());
  out << j.dump(2) << "\n";
}

TransferResult load_transfer_result(const std::filesystem::path& path,
                                    const DatasetVariant& variant) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open result file: " + path.string());
  json j = json::parse(in);

  const auto source_id = j.at("source_author").get<std::string>();
  const auto target_id = j.at("target_author").get<std::string>();
  auto find = [&](const std::vector<AuthorEpisode>& eps, const std::string& id,
                  const char* role) -> const AuthorEpisode& {
    for (const auto& ep : eps) {
      if (ep.author_id == id) return ep;
    }
    throw std::runtime_error("result file " + path.string() + " names unknown " + role +
                             " author " + id);
  };

  TransferResult r;
  r.pair.source = find(variant.sources, source_id, "source");
  r.pair.target = find(variant.targets, target_id, "target");
  r.method = j.at("method").get<std::string>();
  r.outputs = j.at("outputs").get<std::vector<std::string>>();
  r.trace = trace_from_json(j.at("trace"));
  r.config = j.at("config");
  if (r.outputs.size() != kPostsPerEpisode) {
    throw std::runtime_error("result file " + path.string() + " has " +
                             std::to_string(r.outputs.size()) + " outputs");
  }
  return r;
}

}  // namespace styll

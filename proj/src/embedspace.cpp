#include "styll/embedspace.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "styll/text.hpp"

namespace styll {

using nlohmann::json;

namespace {

EmbeddingVector normalized_or_throw(EmbeddingVector v, const std::string& who) {
  const double n = v.norm();
  if (!(n > 0.0) || !v.allFinite()) {
    throw std::runtime_error(who + ": embedding is zero or non-finite, cannot normalize");
  }
  return v / n;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

EmbeddingVector AuthorshipSpace::embed_set(std::span<const std::string> posts) const {
  // Pooled default for per-text spaces: mean of per-post unit vectors.
  EmbeddingVector acc = EmbeddingVector::Zero(dim());
  for (const auto& post : posts) {
    acc += normalized_or_throw(embed_text(post), name());
  }
  acc /= static_cast<double>(posts.size());
  return acc;
}

EmbeddingVector AuthorshipSpace::embed_text(const std::string&) const {
  throw std::runtime_error(name() + ": per-text embedding not supported by this space");
}

MockNgramSpace::MockNgramSpace(Eigen::Index dim, bool set_native, std::string name)
    : dim_(dim), set_native_(set_native), name_(std::move(name)) {
  if (dim_ < 2) throw std::invalid_argument("MockNgramSpace: dim must be >= 2");
}

void MockNgramSpace::accumulate(const std::string& text, EmbeddingVector& acc) const {
  const std::string_view sv = text;
  if (sv.size() < 3) {
    const std::uint64_t h = fnv1a64(sv);
    acc[static_cast<Eigen::Index>((h >> 1) % dim_)] += (h & 1) ? 1.0 : -1.0;
    return;
  }
  for (std::size_t i = 0; i + 3 <= sv.size(); ++i) {
    const std::uint64_t h = fnv1a64(sv.substr(i, 3));
    acc[static_cast<Eigen::Index>((h >> 1) % dim_)] += (h & 1) ? 1.0 : -1.0;
  }
}

EmbeddingVector MockNgramSpace::embed_text(const std::string& text) const {
  EmbeddingVector acc = EmbeddingVector::Zero(dim_);
  accumulate(text, acc);
  return acc;
}

EmbeddingVector MockNgramSpace::embed_set(std::span<const std::string> posts) const {
  if (!set_native_) return AuthorshipSpace::embed_set(posts);
  EmbeddingVector acc = EmbeddingVector::Zero(dim_);
  for (const auto& post : posts) accumulate(post, acc);
  return acc;
}

double MockOverlapScorer::score(const std::string& a, const std::string& b) const {
  auto tokens = [](const std::string& s) {
    std::unordered_map<std::string, std::size_t> counts;
    std::size_t total = 0;
    std::istringstream in(text::to_lower_ascii(s));
    std::string tok;
    while (in >> tok) {
      ++counts[tok];
      ++total;
    }
    return std::make_pair(std::move(counts), total);
  };
  auto [ca, na] = tokens(a);
  auto [cb, nb] = tokens(b);
  if (na == 0 && nb == 0) return 1.0;
  if (na == 0 || nb == 0) return 0.0;
  std::size_t overlap = 0;
  for (const auto& [tok, n] : ca) {
    auto it = cb.find(tok);
    if (it != cb.end()) overlap += std::min(n, it->second);
  }
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(na + nb);
}

EmbeddingVector embed_episode(const AuthorshipSpace& space,
                              std::span<const std::string> posts) {
  if (posts.empty()) throw std::invalid_argument("embed_episode: no posts");
  for (const auto& p : posts) {
    if (text::trim(p).empty()) {
      throw std::invalid_argument("embed_episode: empty post in episode");
    }
  }
  EmbeddingVector v;
  try {
    v = space.embed_set(posts);
  } catch (const std::exception& e) {
    throw std::runtime_error("space " + space.name() + " failed: " + e.what());
  }
  if (space.dim() > 0 && v.size() != space.dim()) {
    throw std::runtime_error("space " + space.name() + " returned wrong dimension");
  }
  return normalized_or_throw(std::move(v), "space " + space.name());
}

std::string to_string(MisMode mode) {
  return mode == MisMode::kAligned ? "aligned" : "cross";
}

MisMode mis_mode_from_string(const std::string& s) {
  if (s == "aligned") return MisMode::kAligned;
  if (s == "cross") return MisMode::kCross;
  throw std::invalid_argument("unknown MIS mode: " + s);
}

double mis_set(const SemanticScorer& scorer, std::span<const std::string> a,
               std::span<const std::string> b, MisMode mode) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("mis_set: score over empty post sets is undefined");
  }
  double sum = 0.0;
  if (mode == MisMode::kAligned) {
    if (a.size() != b.size()) {
      throw std::invalid_argument("mis_set: aligned mode requires equal-size sets");
    }
    for (std::size_t i = 0; i < a.size(); ++i) sum += scorer.score(a[i], b[i]);
    return sum / static_cast<double>(a.size());
  }
  for (const auto& x : a) {
    for (const auto& y : b) sum += scorer.score(x, y);
  }
  return sum / static_cast<double>(a.size() * b.size());
}

void save_embeddings(const std::vector<EmbeddingRecord>& records,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embeddings file: " + path.string());
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["space"] = r.space;
    j["dim"] = r.values.size();
    j["values"] = std::vector<double>(r.values.data(), r.values.data() + r.values.size());
    out << j.dump() << "\n";
  }
}

std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings file: " + path.string());
  std::vector<EmbeddingRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) + ": " + e.what());
    }
    EmbeddingRecord r;
    r.id = j.at("id").get<std::string>();
    r.space = j.at("space").get<std::string>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != j.at("dim").get<std::size_t>()) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                               ": dim field disagrees with values length");
    }
    r.values = Eigen::Map<const EmbeddingVector>(values.data(),
                                                 static_cast<Eigen::Index>(values.size()));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace styll

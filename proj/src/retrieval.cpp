#include "styll/retrieval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "styll/rng.hpp"

namespace styll {

using nlohmann::json;

CandidatePool CandidatePool::build(const std::vector<EmbeddingRecord>& records,
                                   const std::string& space) {
  std::vector<const EmbeddingRecord*> selected;
  for (const auto& r : records) {
    if (r.space == space) selected.push_back(&r);
  }
  if (selected.size() < 2) {
    throw std::runtime_error("candidate pool for space " + space + " needs >= 2 entries, got " +
                             std::to_string(selected.size()));
  }
  CandidatePool pool;
  pool.space_ = space;
  const Eigen::Index dim = selected.front()->values.size();
  pool.matrix_.resize(static_cast<Eigen::Index>(selected.size()), dim);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& r = *selected[i];
    if (r.values.size() != dim) {
      throw std::runtime_error("candidate " + r.id + " has dimension " +
                               std::to_string(r.values.size()) + ", pool dimension is " +
                               std::to_string(dim));
    }
    if (!pool.index_of_.emplace(r.id, i).second) {
      throw std::runtime_error("duplicate author_id in pool: " + r.id);
    }
    const double n = r.values.norm();
    if (!(n > 0.0)) throw std::runtime_error("candidate " + r.id + " has zero embedding");
    pool.matrix_.row(static_cast<Eigen::Index>(i)) = r.values.transpose() / n;
    pool.ids_.push_back(r.id);
  }
  return pool;
}

CandidatePool CandidatePool::build(std::span<const AuthorEpisode> episodes,
                                   const AuthorshipSpace& space) {
  std::vector<EmbeddingRecord> records;
  records.reserve(episodes.size());
  for (const auto& ep : episodes) {
    records.push_back({ep.author_id, space.name(), embed_episode(space, ep.post_texts())});
  }
  return build(records, space.name());
}

RankedCandidates::RankedCandidates(std::vector<std::string> ids, std::vector<double> similarities)
    : ids_(std::move(ids)), similarities_(std::move(similarities)) {
  if (ids_.size() != similarities_.size()) {
    throw std::invalid_argument("RankedCandidates: ids/similarities size mismatch");
  }
}

std::size_t RankedCandidates::rank_of(const std::string& author_id) const {
  if (rank_cache_.empty()) {
    rank_cache_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) rank_cache_.emplace(ids_[i], i + 1);
  }
  auto it = rank_cache_.find(author_id);
  if (it == rank_cache_.end()) {
    throw std::runtime_error("author " + author_id + " not present in ranking");
  }
  return it->second;
}

namespace {

RankedCandidates order_by_similarity(const CandidatePool& pool, std::vector<std::size_t> rows,
                                     const Eigen::VectorXd& sims,
                                     std::optional<std::size_t> k) {
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    const double sa = sims[static_cast<Eigen::Index>(a)];
    const double sb = sims[static_cast<Eigen::Index>(b)];
    if (sa != sb) return sa > sb;
    return pool.ids()[a] < pool.ids()[b];
  });
  const std::size_t keep = k ? std::min(*k, rows.size()) : rows.size();
  std::vector<std::string> ids;
  std::vector<double> out_sims;
  ids.reserve(keep);
  out_sims.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    ids.push_back(pool.ids()[rows[i]]);
    out_sims.push_back(sims[static_cast<Eigen::Index>(rows[i])]);
  }
  return RankedCandidates(std::move(ids), std::move(out_sims));
}

void check_query_dim(const CandidatePool& pool, const Eigen::Ref<const EmbeddingVector>& query) {
  if (query.size() != pool.dim()) {
    throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                " does not match pool dimension " + std::to_string(pool.dim()));
  }
}

}  // namespace

RankedCandidates ExactIndex::rank(const Eigen::Ref<const EmbeddingVector>& query,
                                  std::optional<std::size_t> k) const {
  check_query_dim(pool_, query);
  const Eigen::VectorXd sims = pool_.matrix() * query;
  std::vector<std::size_t> rows(pool_.size());
  std::iota(rows.begin(), rows.end(), 0);
  return order_by_similarity(pool_, std::move(rows), sims, k);
}

IvfIndex::IvfIndex(const CandidatePool& pool, Options options) : pool_(pool), options_(options) {
  const std::size_t n = pool.size();
  if (options_.nlist == 0) {
    options_.nlist = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(
                                                  std::sqrt(static_cast<double>(n)))));
  }
  options_.nlist = std::min(options_.nlist, n);
  if (options_.nprobe == 0) options_.nprobe = std::max<std::size_t>(1, options_.nlist / 4);
  options_.nprobe = std::min(options_.nprobe, options_.nlist);

  // Seeded k-means on the unit sphere: centroids start at sampled pool rows,
  // assignments maximize dot product, centroids renormalize each round.
  SeededRng rng(options_.seed);
  const auto starts = rng.sample_indices(n, options_.nlist);
  centroids_.resize(static_cast<Eigen::Index>(options_.nlist), pool.dim());
  for (std::size_t c = 0; c < options_.nlist; ++c) {
    centroids_.row(static_cast<Eigen::Index>(c)) =
        pool.matrix().row(static_cast<Eigen::Index>(starts[c]));
  }
  std::vector<std::size_t> assignment(n, 0);
  for (int iter = 0; iter < options_.iterations; ++iter) {
    const Eigen::MatrixXd sims = pool.matrix() * centroids_.transpose();
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      sims.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
      assignment[i] = static_cast<std::size_t>(best);
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centroids_.rows(), centroids_.cols());
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(assignment[i])) +=
          pool.matrix().row(static_cast<Eigen::Index>(i));
    }
    for (Eigen::Index c = 0; c < sums.rows(); ++c) {
      const double norm = sums.row(c).norm();
      if (norm > 0.0) centroids_.row(c) = sums.row(c) / norm;
    }
  }
  lists_.assign(options_.nlist, {});
  for (std::size_t i = 0; i < n; ++i) lists_[assignment[i]].push_back(i);
}

RankedCandidates IvfIndex::rank(const Eigen::Ref<const EmbeddingVector>& query,
                                std::optional<std::size_t> k) const {
  check_query_dim(pool_, query);
  const Eigen::VectorXd centroid_sims = centroids_ * query;
  std::vector<std::size_t> order(lists_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return centroid_sims[static_cast<Eigen::Index>(a)] >
           centroid_sims[static_cast<Eigen::Index>(b)];
  });
  std::vector<std::size_t> rows;
  for (std::size_t p = 0; p < options_.nprobe && p < order.size(); ++p) {
    const auto& members = lists_[order[p]];
    rows.insert(rows.end(), members.begin(), members.end());
  }
  Eigen::VectorXd sims(pool_.matrix().rows());
  for (std::size_t r : rows) {
    sims[static_cast<Eigen::Index>(r)] =
        pool_.matrix().row(static_cast<Eigen::Index>(r)).dot(query);
  }
  return order_by_similarity(pool_, std::move(rows), sims, k);
}

RetrievalReport evaluate_obfuscation(const CandidatePool& pool,
                                     std::span<const ObfuscationQuery> queries,
                                     const AuthorshipSpace& space, std::size_t k) {
  if (queries.empty()) throw std::invalid_argument("evaluate_obfuscation: no results");

  std::set<std::string> absent;
  for (const auto& q : queries) {
    if (!pool.contains(q.source_author)) absent.insert(q.source_author);
    if (!pool.contains(q.target_author)) absent.insert(q.target_author);
  }
  if (!absent.empty()) {
    std::string ids;
    for (const auto& id : absent) ids += (ids.empty() ? "" : ", ") + id;
    throw std::runtime_error("authors missing from candidate pool: " + ids);
  }

  RetrievalReport report;
  report.method = queries.front().method;
  report.space = space.name();
  report.k = k;
  report.pool_size = pool.size();
  report.pairs = queries.size();

  ExactIndex index(pool);
  double src_hits = 0, src_rr = 0, src_rank_sum = 0;
  double tgt_hits = 0, tgt_rr = 0, tgt_rank_sum = 0;
  std::size_t confused = 0;
  for (const auto& q : queries) {
    const EmbeddingVector query = embed_episode(space, q.outputs);
    const RankedCandidates ranking = index.rank(query);
    const std::size_t src_rank = ranking.rank_of(q.source_author);
    const std::size_t tgt_rank = ranking.rank_of(q.target_author);
    src_hits += src_rank <= k ? 1.0 : 0.0;
    tgt_hits += tgt_rank <= k ? 1.0 : 0.0;
    src_rr += 1.0 / static_cast<double>(src_rank);
    tgt_rr += 1.0 / static_cast<double>(tgt_rank);
    src_rank_sum += static_cast<double>(src_rank);
    tgt_rank_sum += static_cast<double>(tgt_rank);
    if (tgt_rank < src_rank) ++confused;
  }
  const double n = static_cast<double>(queries.size());
  report.source = {src_hits / n, src_rr / n, src_rank_sum / n};
  report.target = {tgt_hits / n, tgt_rr / n, tgt_rank_sum / n};
  report.confusion = static_cast<double>(confused) / n;
  return report;
}

RetrievalReport evaluate_obfuscation(const CandidatePool& pool,
                                     std::span<const TransferResult> results,
                                     const AuthorshipSpace& space, std::size_t k) {
  std::vector<ObfuscationQuery> queries;
  queries.reserve(results.size());
  for (const auto& r : results) {
    queries.push_back(
        {r.pair.source.author_id, r.pair.target.author_id, r.method, r.outputs});
  }
  return evaluate_obfuscation(pool, queries, space, k);
}

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_retrieval_report(const RetrievalReport& report, const std::filesystem::path& path) {
  json j;
  j["method"] = report.method;
  j["space"] = report.space;
  j["k"] = report.k;
  j["pool_size"] = report.pool_size;
  j["pairs"] = report.pairs;
  j["source"] = {{"recall_at_k", report.source.recall_at_k},
                 {"mrr", report.source.mrr},
                 {"mean_rank", report.source.mean_rank}};
  j["target"] = {{"recall_at_k", report.target.recall_at_k},
                 {"mrr", report.target.mrr},
                 {"mean_rank", report.target.mean_rank}};
  j["confusion"] = report.confusion;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write retrieval report: " + path.string());
  out << j.dump(2) << "\n";
}

std::string retrieval_report_csv(const RetrievalReport& report) {
  std::ostringstream out;
  out << "method,space,role,recall_at_" << report.k << ",mrr,mean_rank,confusion\n";
  out << report.method << "," << report.space << ",source,"
      << full_precision(report.source.recall_at_k) << "," << full_precision(report.source.mrr)
      << "," << full_precision(report.source.mean_rank) << ","
      << full_precision(report.confusion) << "\n";
  out << report.method << "," << report.space << ",target,"
      << full_precision(report.target.recall_at_k) << "," << full_precision(report.target.mrr)
      << "," << full_precision(report.target.mean_rank) << ","
      << full_precision(report.confusion) << "\n";
  return out.str();
}

std::string retrieval_report_table(const RetrievalReport& report) {
  char line[256];
  std::ostringstream out;
  out << "method " << report.method << " / space " << report.space << " (pool "
      << report.pool_size << ", k=" << report.k << ")\n";
  std::snprintf(line, sizeof(line), "%-8s %10s %8s %11s\n", "role",
                ("R@" + std::to_string(report.k)).c_str(), "MRR", "mean rank");
  out << line;
  std::snprintf(line, sizeof(line), "%-8s %10.2f %8.2f %11.2f\n", "source",
                report.source.recall_at_k, report.source.mrr, report.source.mean_rank);
  out << line;
  std::snprintf(line, sizeof(line), "%-8s %10.2f %8.2f %11.2f\n", "target",
                report.target.recall_at_k, report.target.mrr, report.target.mean_rank);
  out << line;
  std::snprintf(line, sizeof(line), "confusion %.2f\n", report.confusion);
  out << line;
  return out.str();
}

}  // namespace styll

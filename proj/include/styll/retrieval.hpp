#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "styll/embedspace.hpp"
#include "styll/transfer.hpp"

namespace styll {

/// Immutable candidate-author pool: unit-norm embeddings stored row-wise for
/// one matrix-vector product per query.
class CandidatePool {
 public:
  /// Builds from (author_id, vector) entries; rejects duplicates, dimension
  /// mismatches (error names the offending id) and pools smaller than 2.
  static CandidatePool build(const std::vector<EmbeddingRecord>& records,
                             const std::string& space);

  /// Builds by embedding episodes directly.
  static CandidatePool build(std::span<const AuthorEpisode> episodes,
                             const AuthorshipSpace& space);

  std::size_t size() const { return ids_.size(); }
  Eigen::Index dim() const { return matrix_.cols(); }
  const std::string& space() const { return space_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  bool contains(const std::string& author_id) const { return index_of_.count(author_id) > 0; }

 private:
  std::vector<std::string> ids_;
  Eigen::MatrixXd matrix_;  // size() x dim(), rows unit-norm
  std::string space_;
  std::unordered_map<std::string, std::size_t> index_of_;
};

/// Candidate authors ordered by descending cosine similarity to a query,
/// ties broken by ascending author_id. rank_of is 1-based.
class RankedCandidates {
 public:
  RankedCandidates(std::vector<std::string> ids, std::vector<double> similarities);

  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<double>& similarities() const { return similarities_; }
  std::size_t rank_of(const std::string& author_id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> similarities_;
  mutable std::unordered_map<std::string, std::size_t> rank_cache_;
};

/// Ranking backend. The exact backend fully sorts the pool by cosine (the
/// ranking is identical under the scaled angular similarity, which is a
/// strictly monotone function of cosine).
class PoolIndex {
 public:
  virtual ~PoolIndex() = default;
  virtual std::string name() const = 0;
  virtual RankedCandidates rank(const Eigen::Ref<const EmbeddingVector>& query,
                                std::optional<std::size_t> k = std::nullopt) const = 0;
};

class ExactIndex : public PoolIndex {
 public:
  explicit ExactIndex(const CandidatePool& pool) : pool_(pool) {}
  std::string name() const override { return "exact"; }
  RankedCandidates rank(const Eigen::Ref<const EmbeddingVector>& query,
                        std::optional<std::size_t> k = std::nullopt) const override;

 private:
  const CandidatePool& pool_;
};

/// Inverted-file approximate backend: pool vectors are clustered with a
/// seeded k-means (spherical, fixed iteration count, deterministic); queries
/// scan the nprobe closest clusters exactly. Intended for 100K-scale pools;
/// ExactIndex remains the correctness oracle.
class IvfIndex : public PoolIndex {
 public:
  struct Options {
    std::size_t nlist = 0;   // 0: round(sqrt(pool size))
    std::size_t nprobe = 0;  // 0: max(1, nlist / 4)
    std::uint64_t seed = 0;
    int iterations = 10;
  };
  explicit IvfIndex(const CandidatePool& pool) : IvfIndex(pool, Options{}) {}
  IvfIndex(const CandidatePool& pool, Options options);
  std::string name() const override { return "ivf"; }
  RankedCandidates rank(const Eigen::Ref<const EmbeddingVector>& query,
                        std::optional<std::size_t> k = std::nullopt) const override;

 private:
  const CandidatePool& pool_;
  Options options_;
  Eigen::MatrixXd centroids_;                     // nlist x dim
  std::vector<std::vector<std::size_t>> lists_;   // member row indices per centroid
};

struct RoleRetrievalStats {
  double recall_at_k = 0.0;
  double mrr = 0.0;
  double mean_rank = 0.0;
};

struct RetrievalReport {
  std::string method;
  std::string space;
  std::size_t k = 8;
  std::size_t pool_size = 0;
  std::size_t pairs = 0;
  RoleRetrievalStats source;
  RoleRetrievalStats target;
  /// Fraction of pairs whose target author outranks the source author.
  double confusion = 0.0;
};

/// A transfer result reduced to what retrieval needs, so the evaluation can
/// run from result files alone.
struct ObfuscationQuery {
  std::string source_author;
  std::string target_author;
  std::string method;
  std::vector<std::string> outputs;
};

/// Runs authorship identification over every transfer result: the query is
/// the embedding of the 16 transferred posts, and source/target ranks over
/// the pool feed R@k, MRR, mean rank per role plus the retrieval confusion
/// fraction. Every pair's source and target author must be present in the
/// pool.
RetrievalReport evaluate_obfuscation(const CandidatePool& pool,
                                     std::span<const ObfuscationQuery> queries,
                                     const AuthorshipSpace& space, std::size_t k = 8);
RetrievalReport evaluate_obfuscation(const CandidatePool& pool,
                                     std::span<const TransferResult> results,
                                     const AuthorshipSpace& space, std::size_t k = 8);

void save_retrieval_report(const RetrievalReport& report, const std::filesystem::path& path);
std::string retrieval_report_csv(const RetrievalReport& report);
std::string retrieval_report_table(const RetrievalReport& report);

}  // namespace styll

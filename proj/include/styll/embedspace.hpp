#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace styll {

/// Unit-norm embedding of one episode in an authorship/style space.
using EmbeddingVector = Eigen::VectorXd;

/// Maps a 16-post episode to a unit vector. Set-native adapters override
/// embed_set; per-text adapters implement embed_text and inherit the pooled
/// default (mean of per-post unit vectors, renormalized). Adapters must be
/// deterministic: same posts, same vector.
class AuthorshipSpace {
 public:
  virtual ~AuthorshipSpace() = default;
  virtual std::string name() const = 0;
  virtual Eigen::Index dim() const = 0;

  /// Embedding of a set of posts, not yet normalized by the caller.
  virtual EmbeddingVector embed_set(std::span<const std::string> posts) const;

  /// Embedding of a single text; only per-text spaces need to support this.
  virtual EmbeddingVector embed_text(const std::string& text) const;
};

/// Semantic equivalence score in [0, 1].
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual std::string name() const = 0;
  virtual double score(const std::string& a, const std::string& b) const = 0;
};

/// Deterministic hash-based space: every byte trigram of a post is hashed
/// with FNV-1a 64; the hash's low bit picks a sign and the remaining bits an
/// index into a D-dimensional accumulator, which is then L2-normalized. The
/// embedding is a pure function of the episode's trigram multiset, so
/// fixtures are reproducible across implementations. Construct with
/// set_native=false to exercise the per-text pooling path.
class MockNgramSpace : public AuthorshipSpace {
 public:
  explicit MockNgramSpace(Eigen::Index dim = 256, bool set_native = true,
                          std::string name = "mock");
  std::string name() const override { return name_; }
  Eigen::Index dim() const override { return dim_; }
  EmbeddingVector embed_set(std::span<const std::string> posts) const override;
  EmbeddingVector embed_text(const std::string& text) const override;

 private:
  void accumulate(const std::string& text, EmbeddingVector& acc) const;
  Eigen::Index dim_;
  bool set_native_;
  std::string name_;
};

/// Deterministic token-overlap F1: both texts are lowercased and
/// whitespace-split; the score is 2*|A intersect B| / (|A| + |B|) over token
/// multisets. Symmetric, 1 on identical texts, 0 on disjoint vocabulary.
class MockOverlapScorer : public SemanticScorer {
 public:
  std::string name() const override { return "mock-overlap"; }
  double score(const std::string& a, const std::string& b) const override;
};

/// Adapter for model-backed spaces served over HTTP: POST {"posts": [...]}
/// and read back {"values": [...]}. The dimension is learned from the first
/// reply. Credentials come from STYLL_API_KEY as a bearer token.
class HttpSpace : public AuthorshipSpace {
 public:
  explicit HttpSpace(const std::string& url);
  std::string name() const override { return name_; }
  Eigen::Index dim() const override { return dim_; }
  EmbeddingVector embed_set(std::span<const std::string> posts) const override;

 private:
  std::string name_;
  std::string scheme_host_;
  std::string path_;
  mutable Eigen::Index dim_ = 0;
};

/// Validates and embeds one episode: 16 nonempty posts in, unit vector out.
EmbeddingVector embed_episode(const AuthorshipSpace& space,
                              std::span<const std::string> posts);

enum class MisMode { kAligned, kCross };

std::string to_string(MisMode mode);
MisMode mis_mode_from_string(const std::string& s);

/// Average semantic score between two sets of posts. Aligned mode pairs
/// A[i] with B[i] (sizes must match); cross mode averages over all |A| x |B|
/// pairs. Empty inputs are an error.
double mis_set(const SemanticScorer& scorer, std::span<const std::string> a,
               std::span<const std::string> b, MisMode mode);

/// One row of the line-delimited embedding cache file.
struct EmbeddingRecord {
  std::string id;
  std::string space;
  EmbeddingVector values;
};

/// Line-delimited JSON records {id, space, dim, values}; the pool file format
/// of the retrieval engine.
void save_embeddings(const std::vector<EmbeddingRecord>& records,
                     const std::filesystem::path& path);
std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path);

}  // namespace styll

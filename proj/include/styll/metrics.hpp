#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "styll/embedspace.hpp"
#include "styll/transfer.hpp"

namespace styll {

/// Denominators below this are treated as degenerate (coincident embeddings
/// or a saturated baseline MIS) and the pair is excluded from aggregates.
inline constexpr double kDegenerateEps = 1e-6;

/// Angular similarity scaled to S = (sim + 1) / 2 with
/// sim = 1 - arccos(cos(u, v)) / pi. The cosine is clamped to [-1, 1] before
/// arccos so near-parallel vectors cannot produce NaN. Throws on zero-norm
/// input.
template <typename DU, typename DV>
typename DU::Scalar scaled_similarity(const Eigen::MatrixBase<DU>& u,
                                      const Eigen::MatrixBase<DV>& v) {
  using Scalar = typename DU::Scalar;
  const Scalar norms = u.norm() * v.norm();
  if (!(norms > Scalar(0))) {
    throw std::invalid_argument("scaled_similarity: zero vector cannot be normalized");
  }
  Scalar c = u.dot(v) / norms;
  c = std::min(Scalar(1), std::max(Scalar(-1), c));
  const Scalar sim = Scalar(1) - std::acos(c) / std::numbers::pi_v<Scalar>;
  return (sim + Scalar(1)) / Scalar(2);
}

/// Complement S_c = 1 - S.
template <typename DU, typename DV>
typename DU::Scalar similarity_complement(const Eigen::MatrixBase<DU>& u,
                                          const Eigen::MatrixBase<DV>& v) {
  return typename DU::Scalar(1) - scaled_similarity(u, v);
}

/// Movement away from the source author as a fraction of the source-target
/// distance: min(S_c(R_st, R_s), S_c(R_t, R_s)) / S_c(R_t, R_s). nullopt when
/// the denominator underflows eps (source and target embeddings coincide).
std::optional<double> away_score(const Eigen::Ref<const EmbeddingVector>& r_st,
                                 const Eigen::Ref<const EmbeddingVector>& r_s,
                                 const Eigen::Ref<const EmbeddingVector>& r_t,
                                 double eps = kDegenerateEps);

/// Movement towards the target author as a fraction of the maximum possible:
/// max(S(R_st, R_t) - S(R_s, R_t), 0) / S_c(R_s, R_t).
std::optional<double> towards_score(const Eigen::Ref<const EmbeddingVector>& r_st,
                                    const Eigen::Ref<const EmbeddingVector>& r_s,
                                    const Eigen::Ref<const EmbeddingVector>& r_t,
                                    double eps = kDegenerateEps);

/// Semantic preservation relative to the target-source floor:
/// max(mis_st_s - mis_t_s, 0) / (1 - mis_t_s). nullopt when mis_t_s
/// saturates at 1.
std::optional<double> sim_score(double mis_st_s, double mis_t_s, double eps = kDegenerateEps);

/// Nested geometric mean G(G(away, towards), sim)
/// = (away * towards)^(1/4) * sim^(1/2).
double joint_score(double away, double towards, double sim);

/// True when the transferred embedding is strictly closer to the target than
/// to the source; ties are false.
bool confusion_indicator(const Eigen::Ref<const EmbeddingVector>& r_st,
                         const Eigen::Ref<const EmbeddingVector>& r_s,
                         const Eigen::Ref<const EmbeddingVector>& r_t);

struct PairScore {
  std::string source_author;
  std::string target_author;
  double away = 0.0;
  double towards = 0.0;
  double sim = 0.0;
  double joint = 0.0;
  bool confused = false;
  /// When set, a denominator underflowed and the four metric values above are
  /// meaningless; the confusion indicator is still defined.
  bool degenerate = false;
};

struct VariantReport {
  std::string method;
  std::string space;
  std::string mis_baseline_mode = "aligned";
  std::vector<PairScore> pairs;
  std::vector<std::string> missing;  // "source->target" ids absent from results
  std::size_t expected_pairs = 0;
  std::size_t degenerate_count = 0;
  double mean_away = 0.0;
  double mean_towards = 0.0;
  double mean_sim = 0.0;
  double mean_joint = 0.0;
  double confusion = 0.0;  // fraction over all scored pairs

  bool incomplete() const { return !missing.empty(); }
};

/// Scores every result of one method over a variant: per-pair
/// Away/Towards/Sim/Joint/Confusion plus arithmetic-mean aggregates over
/// non-degenerate pairs. MIS(P_st, P_s) is always aligned (output i rewrites
/// source post i); the MIS(P_t, P_s) baseline term defaults to aligned as
/// well so that copy-tgt scores Sim = 0 under any scorer, with cross mode
/// available as a sensitivity knob. Missing pairs are reported and skipped.
VariantReport score_variant(const DatasetVariant& variant,
                            std::span<const TransferResult> results,
                            const AuthorshipSpace& space, const SemanticScorer& scorer,
                            MisMode baseline_mode = MisMode::kAligned);

void save_variant_report(const VariantReport& report, const std::filesystem::path& path);
VariantReport load_variant_report(const std::filesystem::path& path);

}  // namespace styll

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "styll/corpus.hpp"
#include "styll/embedspace.hpp"
#include "styll/generation.hpp"
#include "styll/metrics.hpp"
#include "styll/retrieval.hpp"
#include "styll/textops.hpp"

namespace styll {

struct RetrievalSettings {
  std::string pool_file;  // empty: rank against the variant's own authors
  std::size_t k = 8;
};

/// One declarative file drives a whole experiment; every field has a
/// reproducible default. See README for the schema.
struct RunConfig {
  std::filesystem::path corpus_file;
  std::filesystem::path variant_file;  // load when set, otherwise build from corpus
  VariantKind kind = VariantKind::kRandom;
  std::uint64_t variant_seed = 0;
  VariantParams params;

  std::vector<std::string> methods;
  std::vector<std::string> spaces;

  std::string backend_step1 = "echo";
  std::string backend_step2 = "echo";
  std::string backend_step3 = "echo";
  std::string backend_paraphrase = "identity";

  GenerationConfig decoding;
  bool use_descriptors = true;
  MisMode mis_baseline_mode = MisMode::kAligned;
  std::uint64_t seed = 0;
  double embed_swap_threshold = 0.6;
  std::filesystem::path synonyms_file;
  std::filesystem::path contractions_file;

  std::filesystem::path cache_dir;  // default: <out_dir>/cache
  std::filesystem::path out_dir = "run";
  std::size_t workers = 1;
  std::optional<RetrievalSettings> retrieval;

  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// SHA-256 over the canonical JSON form; changes iff any field changes.
  std::string digest() const;
};

struct CellStatus {
  std::string method;
  std::string source_author;
  std::string target_author;
  std::string file;  // out_dir-relative result path
  bool done = false;
  bool resumed = false;
  std::string error;
};

struct RunManifest {
  std::string run_id;
  std::string config_digest;
  nlohmann::json config;
  std::string variant_file;
  std::vector<std::string> methods;
  std::vector<std::string> spaces;
  std::vector<CellStatus> cells;

  std::size_t unresolved() const;
  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

/// Executes every (method, pair) cell with caching and resume, then scores,
/// exports pools and PCA coordinates, and renders reports under
/// config.out_dir. Cells whose result file already exists are never
/// recomputed.
RunManifest run_experiment(const RunConfig& config);

/// Re-derives metric reports and summary tables for an existing run
/// directory from the files on disk.
void evaluate_run(const std::filesystem::path& run_dir);

/// Standalone retrieval evaluation from files alone: a pool file, a results
/// directory (scanned recursively, grouped by method) and a space spec.
/// Writes one report per method into out_dir.
void retrieve_run(const std::filesystem::path& pool_file,
                  const std::filesystem::path& results_dir, const std::string& space_spec,
                  std::size_t k, const std::filesystem::path& out_dir);

/// Writes pca/<space>.csv for a run: sources, targets, and each method's
/// transferred episodes projected onto the top-2 principal components.
std::filesystem::path pca_export_run(const std::filesystem::path& run_dir,
                                     const std::string& space_spec,
                                     const std::vector<std::string>& only_methods = {});

/// Renders the per-space summary tables (text + CSV) from report files and
/// returns the text form for display. Gaps are flagged for incomplete runs.
std::string render_reports(const std::filesystem::path& run_dir);

std::string metrics_summary_table(std::span<const VariantReport> reports);
std::string metrics_summary_csv(std::span<const VariantReport> reports);

/// Backend registries. Generator specs: "echo", "fixed:<text>",
/// "http:<url>". Paraphraser specs: "identity", "http:<url>", or
/// "prompt:<generator spec>". Space specs: "mock", "mock-post",
/// "mock:<dim>", "http:<url>".
std::unique_ptr<TextGenerator> make_generator(const std::string& spec);
std::unique_ptr<AuthorshipSpace> make_space(const std::string& spec);

std::string sanitize_filename(const std::string& name);

}  // namespace styll

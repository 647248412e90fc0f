#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "styll/harness.hpp"

namespace {

int cmd_build_variant(const std::string& corpus, const std::string& kind, std::uint64_t seed,
                      std::size_t per_role, std::string community, std::size_t community_rank,
                      std::size_t min_distinct, const std::string& out) {
  std::vector<std::string> warnings;
  const auto episodes = styll::load_corpus(corpus, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  const auto variant_kind = styll::variant_kind_from_string(kind);
  if (variant_kind == styll::VariantKind::kSingle && community.empty()) {
    community = styll::kth_most_common_subreddit(episodes, community_rank);
    std::cerr << "designated community (rank " << community_rank << "): " << community << "\n";
  }
  styll::VariantParams params;
  params.per_role = per_role;
  params.designated_community = community;
  params.min_distinct = min_distinct;

  const auto variant = styll::build_variant(episodes, variant_kind, seed, params);
  styll::save_variant(variant, out);
  std::cout << "wrote " << out << " (" << variant.sources.size() << "+"
            << variant.targets.size() << " authors, "
            << styll::enumerate_pairs(variant).size() << " pairs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-resource authorship style transfer toolkit"};
  app.require_subcommand(1);

  // build-variant
  auto* build = app.add_subcommand("build-variant", "sample a dataset variant from a corpus");
  std::string bv_corpus, bv_kind = "random", bv_community, bv_out = "variant.json";
  std::uint64_t bv_seed = 0;
  std::size_t bv_per_role = 15, bv_rank = 2, bv_min_distinct = 13;
  build->add_option("--corpus", bv_corpus, "line-delimited JSON corpus")->required();
  build->add_option("--kind", bv_kind, "random | single | diverse");
  build->add_option("--seed", bv_seed, "sampling seed");
  build->add_option("--per-role", bv_per_role, "authors per role (default 15)");
  build->add_option("--community", bv_community, "designated community for kind=single");
  build->add_option("--community-rank", bv_rank,
                    "pick the k-th most common community when --community is not given");
  build->add_option("--min-distinct", bv_min_distinct,
                    "minimum distinct communities per episode for kind=diverse");
  build->add_option("-o,--out", bv_out, "output variant file");

  // run
  auto* run = app.add_subcommand("run", "execute an experiment from a config file");
  std::string run_config_path;
  std::vector<std::string> run_methods;
  std::string run_out, run_cache, run_step1, run_step2, run_step3, run_mis_mode;
  double run_temperature = -1.0, run_top_p = -1.0;
  int run_context_limit = 0, run_max_new_tokens = 0;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false, run_no_descriptors = false;
  std::size_t run_workers = 0;
  run->add_option("--config", run_config_path, "run config JSON")->required();
  run->add_option("--baseline,--method", run_methods,
                  "restrict to these methods (copy-src, copy-tgt, capi, cont, synm, punc, "
                  "emoj, ling, embed-swap, para-neu, para-div, styll)");
  run->add_option("--seed", run_seed, "baseline seed override")
      ->each([&](const std::string&) { run_seed_set = true; });
  run->add_option("--model-step1", run_step1, "step-1 backend override");
  run->add_option("--model-step2", run_step2, "step-2 backend override");
  run->add_option("--model-step3", run_step3, "step-3 backend override");
  run->add_option("--temperature", run_temperature, "decoding temperature override");
  run->add_option("--top-p", run_top_p, "decoding top_p override");
  run->add_flag("--no-descriptors", run_no_descriptors,
                "drop style descriptors from the transfer prompt");
  run->add_option("--context-limit", run_context_limit, "context limit override (tokens)");
  run->add_option("--max-new-tokens", run_max_new_tokens, "completion budget override");
  run->add_option("--out", run_out, "run directory override");
  run->add_option("--cache", run_cache, "completion cache directory override");
  run->add_option("--workers", run_workers, "worker thread count override");
  run->add_option("--mis-mode", run_mis_mode, "MIS baseline term mode: aligned | cross");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "re-score an existing run directory");
  std::string eval_run;
  eval->add_option("--run", eval_run, "run directory")->required();

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "authorship-identification evaluation");
  std::string rt_pool, rt_results, rt_space = "mock", rt_out = ".";
  std::size_t rt_k = 8;
  retrieve->add_option("--pool", rt_pool, "candidate pool embeddings file")->required();
  retrieve->add_option("--results", rt_results, "directory of transfer result files")
      ->required();
  retrieve->add_option("--space", rt_space, "embedding space spec");
  retrieve->add_option("--k", rt_k, "recall cutoff");
  retrieve->add_option("-o,--out", rt_out, "report output directory");

  // pca-export
  auto* pca = app.add_subcommand("pca-export", "project run embeddings onto 2 components");
  std::string pca_run, pca_space = "mock";
  std::vector<std::string> pca_methods;
  pca->add_option("--run", pca_run, "run directory")->required();
  pca->add_option("--space", pca_space, "embedding space spec");
  pca->add_option("--method", pca_methods, "restrict transfers to these methods");

  // report
  auto* report = app.add_subcommand("report", "render summary tables for a run");
  std::string report_run;
  report->add_option("--run", report_run, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      return cmd_build_variant(bv_corpus, bv_kind, bv_seed, bv_per_role, bv_community, bv_rank,
                               bv_min_distinct, bv_out);
    }
    if (run->parsed()) {
      styll::RunConfig config = styll::RunConfig::from_file(run_config_path);
      if (!run_methods.empty()) config.methods = run_methods;
      if (run_seed_set) config.seed = run_seed;
      if (!run_step1.empty()) config.backend_step1 = run_step1;
      if (!run_step2.empty()) config.backend_step2 = run_step2;
      if (!run_step3.empty()) config.backend_step3 = run_step3;
      if (run_temperature >= 0.0) config.decoding.temperature = run_temperature;
      if (run_top_p > 0.0) config.decoding.top_p = run_top_p;
      if (run_no_descriptors) config.use_descriptors = false;
      if (run_context_limit > 0) config.decoding.context_limit = run_context_limit;
      if (run_max_new_tokens > 0) config.decoding.max_new_tokens = run_max_new_tokens;
      if (!run_out.empty()) config.out_dir = run_out;
      if (!run_cache.empty()) config.cache_dir = run_cache;
      if (run_workers > 0) config.workers = run_workers;
      if (!run_mis_mode.empty()) {
        config.mis_baseline_mode = styll::mis_mode_from_string(run_mis_mode);
      }
      const styll::RunManifest manifest = styll::run_experiment(config);
      std::cout << styll::render_reports(config.out_dir);
      const std::size_t unresolved = manifest.unresolved();
      if (unresolved > 0) {
        std::cerr << unresolved << " cells unresolved; see " << config.out_dir
                  << "/manifest.json\n";
        return 1;
      }
      return 0;
    }
    if (eval->parsed()) {
      styll::evaluate_run(eval_run);
      std::cout << styll::render_reports(eval_run);
      return 0;
    }
    if (retrieve->parsed()) {
      styll::retrieve_run(rt_pool, rt_results, rt_space, rt_k, rt_out);
      return 0;
    }
    if (pca->parsed()) {
      const auto path = styll::pca_export_run(pca_run, pca_space, pca_methods);
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }
    if (report->parsed()) {
      std::cout << styll::render_reports(report_run);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "styll/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "styll/digest.hpp"
#include "styll/pca.hpp"

namespace styll {

using nlohmann::json;

std::string sanitize_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (j.contains("corpus")) c.corpus_file = j.at("corpus").get<std::string>();
  if (j.contains("variant")) {
    const auto& v = j.at("variant");
    if (v.contains("file")) c.variant_file = v.at("file").get<std::string>();
    if (v.contains("kind")) c.kind = variant_kind_from_string(v.at("kind").get<std::string>());
    if (v.contains("seed")) c.variant_seed = v.at("seed").get<std::uint64_t>();
    if (v.contains("per_role")) c.params.per_role = v.at("per_role").get<std::size_t>();
    if (v.contains("community")) {
      c.params.designated_community = v.at("community").get<std::string>();
    }
    if (v.contains("min_distinct")) {
      c.params.min_distinct = v.at("min_distinct").get<std::size_t>();
    }
  }
  if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("spaces")) c.spaces = j.at("spaces").get<std::vector<std::string>>();
  if (j.contains("backends")) {
    const auto& b = j.at("backends");
    if (b.contains("step1")) c.backend_step1 = b.at("step1").get<std::string>();
    if (b.contains("step2")) c.backend_step2 = b.at("step2").get<std::string>();
    if (b.contains("step3")) c.backend_step3 = b.at("step3").get<std::string>();
    if (b.contains("paraphrase")) c.backend_paraphrase = b.at("paraphrase").get<std::string>();
  }
  if (j.contains("decoding")) c.decoding = GenerationConfig::from_json(j.at("decoding"));
  if (j.contains("use_descriptors")) c.use_descriptors = j.at("use_descriptors").get<bool>();
  if (j.contains("mis_baseline_mode")) {
    c.mis_baseline_mode = mis_mode_from_string(j.at("mis_baseline_mode").get<std::string>());
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("embed_swap_threshold")) {
    c.embed_swap_threshold = j.at("embed_swap_threshold").get<double>();
  }
  if (j.contains("synonyms")) c.synonyms_file = j.at("synonyms").get<std::string>();
  if (j.contains("contractions")) c.contractions_file = j.at("contractions").get<std::string>();
  if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
  if (j.contains("retrieval")) {
    RetrievalSettings r;
    if (j.at("retrieval").contains("pool")) {
      r.pool_file = j.at("retrieval").at("pool").get<std::string>();
    }
    if (j.at("retrieval").contains("k")) r.k = j.at("retrieval").at("k").get<std::size_t>();
    c.retrieval = r;
  }
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["corpus"] = corpus_file.string();
  j["variant"] = {{"file", variant_file.string()},
                  {"kind", to_string(kind)},
                  {"seed", variant_seed},
                  {"per_role", params.per_role},
                  {"community", params.designated_community},
                  {"min_distinct", params.min_distinct}};
  j["methods"] = methods;
  j["spaces"] = spaces;
  j["backends"] = {{"step1", backend_step1},
                   {"step2", backend_step2},
                   {"step3", backend_step3},
                   {"paraphrase", backend_paraphrase}};
  j["decoding"] = decoding.to_json();
  j["use_descriptors"] = use_descriptors;
  j["mis_baseline_mode"] = to_string(mis_baseline_mode);
  j["seed"] = seed;
  j["embed_swap_threshold"] = embed_swap_threshold;
  j["synonyms"] = synonyms_file.string();
  j["contractions"] = contractions_file.string();
  j["cache_dir"] = cache_dir.string();
  j["out_dir"] = out_dir.string();
  j["workers"] = workers;
  if (retrieval) {
    j["retrieval"] = {{"pool", retrieval->pool_file}, {"k", retrieval->k}};
  }
  return j;
}

std::string RunConfig::digest() const { return sha256_hex(to_json().dump()); }

std::size_t RunManifest::unresolved() const {
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (!c.done) ++n;
  }
  return n;
}

void RunManifest::save(const std::filesystem::path& path) const {
  json cells_json = json::array();
  for (const auto& c : cells) {
    cells_json.push_back({{"method", c.method},
                          {"source", c.source_author},
                          {"target", c.target_author},
                          {"file", c.file},
                          {"done", c.done},
                          {"resumed", c.resumed},
                          {"error", c.error}});
  }
  json j;
  j["run_id"] = run_id;
  j["config_digest"] = config_digest;
  j["config"] = config;
  j["variant"] = variant_file;
  j["methods"] = methods;
  j["spaces"] = spaces;
  j["cells"] = std::move(cells_json);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << j.dump(2) << "\n";
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  json j = json::parse(in);
  RunManifest m;
  m.run_id = j.at("run_id").get<std::string>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.config = j.at("config");
  m.variant_file = j.at("variant").get<std::string>();
  m.methods = j.at("methods").get<std::vector<std::string>>();
  m.spaces = j.at("spaces").get<std::vector<std::string>>();
  for (const auto& cj : j.at("cells")) {
    CellStatus c;
    c.method = cj.at("method").get<std::string>();
    c.source_author = cj.at("source").get<std::string>();
    c.target_author = cj.at("target").get<std::string>();
    c.file = cj.at("file").get<std::string>();
    c.done = cj.at("done").get<bool>();
    c.resumed = cj.at("resumed").get<bool>();
    c.error = cj.at("error").get<std::string>();
    m.cells.push_back(std::move(c));
  }
  return m;
}

std::unique_ptr<TextGenerator> make_generator(const std::string& spec) {
  if (spec == "echo") return std::make_unique<EchoGenerator>();
  if (spec == "echo-chars") return std::make_unique<EchoGenerator>(TokenCounting::kPerChar);
  if (spec.rfind("fixed:", 0) == 0) {
    return std::make_unique<FixedGenerator>(spec.substr(6));
  }
  if (spec.rfind("http", 0) == 0) return std::make_unique<HttpGenerator>(spec);
  throw std::invalid_argument("unknown generator spec: " + spec);
}

std::unique_ptr<AuthorshipSpace> make_space(const std::string& spec) {
  if (spec == "mock") return std::make_unique<MockNgramSpace>();
  if (spec == "mock-post") {
    return std::make_unique<MockNgramSpace>(256, /*set_native=*/false, "mock-post");
  }
  if (spec.rfind("mock:", 0) == 0) {
    const Eigen::Index dim = std::stol(spec.substr(5));
    return std::make_unique<MockNgramSpace>(dim, true, spec);
  }
  if (spec.rfind("http", 0) == 0) return std::make_unique<HttpSpace>(spec);
  throw std::invalid_argument("unknown space spec: " + spec);
}

namespace {

std::unique_ptr<Paraphraser> make_paraphraser(
    const std::string& spec, CompletionCache& cache, const GenerationConfig& decoding,
    std::vector<std::unique_ptr<TextGenerator>>& owned) {
  if (spec == "identity") return std::make_unique<IdentityParaphraser>();
  if (spec.rfind("prompt:", 0) == 0) {
    owned.push_back(make_generator(spec.substr(7)));
    TextGenerator& raw = *owned.back();
    owned.push_back(std::make_unique<CachedGenerator>(raw, cache));
    return std::make_unique<PromptParaphraser>(*owned.back(), decoding);
  }
  if (spec.rfind("http", 0) == 0) return std::make_unique<HttpParaphraser>(spec);
  throw std::invalid_argument("unknown paraphraser spec: " + spec);
}

/// Everything a run needs, with clear ownership.
struct RunContext {
  RunConfig config;
  DatasetVariant variant;
  std::vector<TransferPair> pairs;
  Toolkit toolkit;
  std::unique_ptr<CompletionCache> cache;
  std::vector<std::unique_ptr<TextGenerator>> generators;
  TextGenerator* step2 = nullptr;
  TextGenerator* step3 = nullptr;
  std::unique_ptr<Paraphraser> step1;
  std::unique_ptr<Paraphraser> para_div;
  std::unique_ptr<Paraphraser> para_neu;
};

TextGenerator* cached(RunContext& ctx, const std::string& spec) {
  ctx.generators.push_back(make_generator(spec));
  TextGenerator& raw = *ctx.generators.back();
  ctx.generators.push_back(std::make_unique<CachedGenerator>(raw, *ctx.cache));
  return ctx.generators.back().get();
}

RunContext make_context(const RunConfig& config) {
  RunContext ctx;
  ctx.config = config;
  config.decoding.validate();

  const auto cache_dir =
      config.cache_dir.empty() ? config.out_dir / "cache" : config.cache_dir;
  ctx.cache = std::make_unique<CompletionCache>(cache_dir);

  if (!config.variant_file.empty() && std::filesystem::exists(config.variant_file)) {
    ctx.variant = load_variant(config.variant_file);
  } else {
    if (config.corpus_file.empty()) {
      throw std::runtime_error("config needs either an existing variant file or a corpus");
    }
    const auto corpus = load_corpus(config.corpus_file);
    ctx.variant = build_variant(corpus, config.kind, config.variant_seed, config.params);
  }
  ctx.pairs = enumerate_pairs(ctx.variant);

  if (!config.synonyms_file.empty()) {
    ctx.toolkit.lexicon =
        std::make_unique<TableLexicon>(TableLexicon::from_file(config.synonyms_file));
  }
  if (!config.contractions_file.empty()) {
    ctx.toolkit.contractions = ContractionTable::from_file(config.contractions_file);
  }

  // Step-1 slot accepts either a generator spec (prompted) or
  // "adapter:<paraphraser spec>" for an external paraphrase model.
  if (config.backend_step1.rfind("adapter:", 0) == 0) {
    ctx.step1 = make_paraphraser(config.backend_step1.substr(8), *ctx.cache, config.decoding,
                                 ctx.generators);
  } else {
    ctx.step1 = std::make_unique<PromptParaphraser>(*cached(ctx, config.backend_step1),
                                                    config.decoding);
  }
  ctx.step2 = cached(ctx, config.backend_step2);
  ctx.step3 = cached(ctx, config.backend_step3);
  ctx.para_neu = std::make_unique<PromptParaphraser>(*cached(ctx, config.backend_step1),
                                                     config.decoding);
  ctx.para_div =
      make_paraphraser(config.backend_paraphrase, *ctx.cache, config.decoding, ctx.generators);
  return ctx;
}

TransferResult run_cell(RunContext& ctx, const std::string& method, const TransferPair& pair) {
  const RunConfig& cfg = ctx.config;
  if (method == methods::kCopySrc) return copy_src(pair);
  if (method == methods::kCopyTgt) return copy_tgt(pair);
  if (method == methods::kCapi) return capi_baseline(pair, cfg.seed);
  if (method == methods::kCont) return cont_baseline(pair, ctx.toolkit.contractions, cfg.seed);
  if (method == methods::kSynm) return synm_baseline(pair, ctx.toolkit);
  if (method == methods::kPunc) return punc_baseline(pair, cfg.seed);
  if (method == methods::kEmoj) return emoj_baseline(pair, cfg.seed);
  if (method == methods::kLing) return ling_baseline(pair, ctx.toolkit, cfg.seed);
  if (method == methods::kEmbedSwap) {
    return embed_swap_baseline(pair, ctx.toolkit, cfg.embed_swap_threshold);
  }
  if (method == methods::kParaNeu) {
    return para_baseline(pair, *ctx.para_neu, cfg.decoding, methods::kParaNeu);
  }
  if (method == methods::kParaDiv) {
    return para_baseline(pair, *ctx.para_div, cfg.decoding, methods::kParaDiv);
  }
  if (method == methods::kStyll) {
    return transfer_episode(pair, {*ctx.step1, *ctx.step2, *ctx.step3}, cfg.decoding,
                            cfg.use_descriptors);
  }
  throw std::invalid_argument("unknown method: " + method);
}

std::string cell_relpath(const std::string& method, const TransferPair& pair) {
  return "results/" + sanitize_filename(method) + "/" +
         sanitize_filename(pair.source.author_id) + "__" +
         sanitize_filename(pair.target.author_id) + ".json";
}

void score_and_report(const std::filesystem::path& out_dir, const DatasetVariant& variant,
                      const std::vector<std::string>& methods,
                      const std::vector<std::string>& spaces, MisMode baseline_mode) {
  const auto reports_dir = out_dir / "reports";
  std::filesystem::create_directories(reports_dir);
  const MockOverlapScorer scorer;

  for (const auto& space_spec : spaces) {
    const auto space = make_space(space_spec);
    std::vector<VariantReport> summaries;
    for (const auto& method : methods) {
      std::vector<TransferResult> results;
      const auto dir = out_dir / "results" / sanitize_filename(method);
      if (std::filesystem::exists(dir)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
          if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
          results.push_back(load_transfer_result(file, variant));
        }
      }
      VariantReport report = score_variant(variant, results, *space, scorer, baseline_mode);
      report.method = method;  // keep the id even when no results exist yet
      save_variant_report(report, reports_dir / ("metrics_" + sanitize_filename(method) + "_" +
                                                 sanitize_filename(space->name()) + ".json"));
      summaries.push_back(std::move(report));
    }
    const std::string base = "summary_" + sanitize_filename(space->name());
    std::ofstream csv(reports_dir / (base + ".csv"));
    csv << metrics_summary_csv(summaries);
    std::ofstream txt(reports_dir / (base + ".txt"));
    txt << metrics_summary_table(summaries);
  }
}

void export_pools(const std::filesystem::path& out_dir, const DatasetVariant& variant,
                  const std::vector<std::string>& spaces) {
  if (spaces.empty()) return;
  const auto pools_dir = out_dir / "pools";
  std::filesystem::create_directories(pools_dir);
  for (const auto& space_spec : spaces) {
    const auto space = make_space(space_spec);
    std::vector<EmbeddingRecord> records;
    for (const auto* role : {&variant.sources, &variant.targets}) {
      for (const auto& ep : *role) {
        records.push_back(
            {ep.author_id, space->name(), embed_episode(*space, ep.post_texts())});
      }
    }
    save_embeddings(records, pools_dir / (sanitize_filename(space->name()) + ".jsonl"));
  }
}

void run_retrieval(const std::filesystem::path& out_dir, const RunConfig& config,
                   const DatasetVariant& variant, const std::vector<std::string>& methods) {
  if (!config.retrieval) return;
  const auto reports_dir = out_dir / "reports";
  std::filesystem::create_directories(reports_dir);
  for (const auto& space_spec : config.spaces) {
    const auto space = make_space(space_spec);
    CandidatePool pool =
        config.retrieval->pool_file.empty()
            ? CandidatePool::build(
                  load_embeddings(out_dir / "pools" /
                                  (sanitize_filename(space->name()) + ".jsonl")),
                  space->name())
            : CandidatePool::build(load_embeddings(config.retrieval->pool_file),
                                   space->name());
    for (const auto& method : methods) {
      std::vector<TransferResult> results;
      const auto dir = out_dir / "results" / sanitize_filename(method);
      if (!std::filesystem::exists(dir)) continue;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& file : files) results.push_back(load_transfer_result(file, variant));
      if (results.empty()) continue;
      const RetrievalReport report =
          evaluate_obfuscation(pool, results, *space, config.retrieval->k);
      const std::string base = "retrieval_" + sanitize_filename(method) + "_" +
                               sanitize_filename(space->name());
      save_retrieval_report(report, reports_dir / (base + ".json"));
      std::ofstream csv(reports_dir / (base + ".csv"));
      csv << retrieval_report_csv(report);
    }
  }
}

void export_run_pca(const std::filesystem::path& out_dir, const DatasetVariant& variant,
                    const std::vector<std::string>& methods,
                    const std::vector<std::string>& spaces,
                    const std::vector<std::string>& only_methods = {}) {
  if (spaces.empty()) return;
  const auto pca_dir = out_dir / "pca";
  std::filesystem::create_directories(pca_dir);
  for (const auto& space_spec : spaces) {
    const auto space = make_space(space_spec);
    std::vector<ProjectionInput> inputs;
    for (const auto& ep : variant.sources) {
      inputs.push_back({"source", ep.author_id, embed_episode(*space, ep.post_texts())});
    }
    for (const auto& ep : variant.targets) {
      inputs.push_back({"target", ep.author_id, embed_episode(*space, ep.post_texts())});
    }
    for (const auto& method : methods) {
      if (!only_methods.empty() &&
          std::find(only_methods.begin(), only_methods.end(), method) == only_methods.end()) {
        continue;
      }
      const auto dir = out_dir / "results" / sanitize_filename(method);
      if (!std::filesystem::exists(dir)) continue;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& file : files) {
        const TransferResult r = load_transfer_result(file, variant);
        inputs.push_back({"transfer:" + method,
                          r.pair.source.author_id + "->" + r.pair.target.author_id,
                          embed_episode(*space, r.outputs)});
      }
    }
    try {
      save_projection_csv(export_pca(inputs),
                          pca_dir / (sanitize_filename(space->name()) + ".csv"));
    } catch (const std::exception& e) {
      std::cerr << "pca export skipped for space " << space->name() << ": " << e.what()
                << "\n";
    }
  }
}

}  // namespace

RunManifest run_experiment(const RunConfig& config) {
  RunContext ctx = make_context(config);
  const auto& out_dir = config.out_dir;
  std::filesystem::create_directories(out_dir);
  save_variant(ctx.variant, out_dir / "variant.json");

  RunManifest manifest;
  manifest.config = config.to_json();
  manifest.config_digest = config.digest();
  manifest.run_id = "run-" + manifest.config_digest.substr(0, 12);
  manifest.variant_file = "variant.json";
  manifest.methods = config.methods;
  manifest.spaces = config.spaces;

  for (const auto& method : config.methods) {
    std::filesystem::create_directories(out_dir / "results" / sanitize_filename(method));
    for (const auto& pair : ctx.pairs) {
      CellStatus cell;
      cell.method = method;
      cell.source_author = pair.source.author_id;
      cell.target_author = pair.target.author_id;
      cell.file = cell_relpath(method, pair);
      manifest.cells.push_back(std::move(cell));
    }
  }

  // Resume pass: a cell is complete iff its result file exists and parses.
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < manifest.cells.size(); ++i) {
    auto& cell = manifest.cells[i];
    const auto path = out_dir / cell.file;
    if (std::filesystem::exists(path)) {
      try {
        load_transfer_result(path, ctx.variant);
        cell.done = true;
        cell.resumed = true;
        continue;
      } catch (const std::exception&) {
        std::filesystem::remove(path);
      }
    }
    pending.push_back(i);
  }

  // Cells are independent; the completion cache serializes its own writes
  // and the registry backends tolerate concurrent calls.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      auto& cell = manifest.cells[pending[slot]];
      const TransferPair* pair = nullptr;
      for (const auto& p : ctx.pairs) {
        if (p.source.author_id == cell.source_author &&
            p.target.author_id == cell.target_author) {
          pair = &p;
          break;
        }
      }
      try {
        save_transfer_result(run_cell(ctx, cell.method, *pair), out_dir / cell.file);
        cell.done = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, config.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  export_pools(out_dir, ctx.variant, config.spaces);
  score_and_report(out_dir, ctx.variant, config.methods, config.spaces,
                   config.mis_baseline_mode);
  run_retrieval(out_dir, config, ctx.variant, config.methods);
  export_run_pca(out_dir, ctx.variant, config.methods, config.spaces);
  manifest.save(out_dir / "manifest.json");
  return manifest;
}

void evaluate_run(const std::filesystem::path& run_dir) {
  const RunManifest manifest = RunManifest::load(run_dir / "manifest.json");
  const RunConfig config = RunConfig::from_json(manifest.config);
  const DatasetVariant variant = load_variant(run_dir / manifest.variant_file);
  score_and_report(run_dir, variant, manifest.methods, manifest.spaces,
                   config.mis_baseline_mode);
}

void retrieve_run(const std::filesystem::path& pool_file,
                  const std::filesystem::path& results_dir, const std::string& space_spec,
                  std::size_t k, const std::filesystem::path& out_dir) {
  const auto space = make_space(space_spec);
  const CandidatePool pool = CandidatePool::build(load_embeddings(pool_file), space->name());

  std::map<std::string, std::vector<ObfuscationQuery>> by_method;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(results_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception&) {
      continue;  // not a result file
    }
    if (!j.contains("source_author") || !j.contains("outputs")) continue;
    ObfuscationQuery q;
    q.source_author = j.at("source_author").get<std::string>();
    q.target_author = j.at("target_author").get<std::string>();
    q.method = j.at("method").get<std::string>();
    q.outputs = j.at("outputs").get<std::vector<std::string>>();
    by_method[q.method].push_back(std::move(q));
  }
  if (by_method.empty()) {
    throw std::runtime_error("no transfer results found under " + results_dir.string());
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& [method, queries] : by_method) {
    const RetrievalReport report = evaluate_obfuscation(pool, queries, *space, k);
    const std::string base =
        "retrieval_" + sanitize_filename(method) + "_" + sanitize_filename(space->name());
    save_retrieval_report(report, out_dir / (base + ".json"));
    std::ofstream csv(out_dir / (base + ".csv"));
    csv << retrieval_report_csv(report);
    std::cout << retrieval_report_table(report);
  }
}

std::filesystem::path pca_export_run(const std::filesystem::path& run_dir,
                                     const std::string& space_spec,
                                     const std::vector<std::string>& only_methods) {
  const RunManifest manifest = RunManifest::load(run_dir / "manifest.json");
  const DatasetVariant variant = load_variant(run_dir / manifest.variant_file);
  export_run_pca(run_dir, variant, manifest.methods, {space_spec}, only_methods);
  const auto space = make_space(space_spec);
  return run_dir / "pca" / (sanitize_filename(space->name()) + ".csv");
}

namespace {

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string metrics_summary_table(std::span<const VariantReport> reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %6s %8s %10s %6s %6s\n", "method", "away",
                "towards", "confusion", "sim", "joint");
  out << line;
  std::vector<std::string> notes;
  for (const auto& r : reports) {
    std::string name = r.method;
    if (r.incomplete()) {
      name += "*";
      notes.push_back("* " + r.method + ": incomplete, " + std::to_string(r.missing.size()) +
                      " of " + std::to_string(r.expected_pairs) + " pairs missing");
    }
    std::snprintf(line, sizeof(line), "%-12s %6s %8s %10s %6s %6s\n", name.c_str(),
                  two_decimals(r.mean_away).c_str(), two_decimals(r.mean_towards).c_str(),
                  two_decimals(r.confusion).c_str(), two_decimals(r.mean_sim).c_str(),
                  two_decimals(r.mean_joint).c_str());
    out << line;
  }
  for (const auto& n : notes) out << n << "\n";
  return out.str();
}

std::string metrics_summary_csv(std::span<const VariantReport> reports) {
  std::ostringstream out;
  out << "method,away,towards,confusion,sim,joint\n";
  for (const auto& r : reports) {
    out << r.method << "," << full_precision(r.mean_away) << ","
        << full_precision(r.mean_towards) << "," << full_precision(r.confusion) << ","
        << full_precision(r.mean_sim) << "," << full_precision(r.mean_joint) << "\n";
  }
  return out.str();
}

std::string render_reports(const std::filesystem::path& run_dir) {
  const RunManifest manifest = RunManifest::load(run_dir / "manifest.json");
  const auto reports_dir = run_dir / "reports";
  std::ostringstream out;
  for (const auto& space_spec : manifest.spaces) {
    const auto space = make_space(space_spec);
    std::vector<VariantReport> reports;
    for (const auto& method : manifest.methods) {
      const auto path = reports_dir / ("metrics_" + sanitize_filename(method) + "_" +
                                       sanitize_filename(space->name()) + ".json");
      if (std::filesystem::exists(path)) reports.push_back(load_variant_report(path));
    }
    const std::string table = metrics_summary_table(reports);
    const std::string base = "summary_" + sanitize_filename(space->name());
    std::ofstream csv(reports_dir / (base + ".csv"));
    csv << metrics_summary_csv(reports);
    std::ofstream txt(reports_dir / (base + ".txt"));
    txt << table;
    out << "space " << space->name() << "\n" << table << "\n";
  }
  return out.str();
}

}  // namespace styll

#include "styll/textops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "styll/text.hpp"

namespace styll {

std::string to_string(CapitalizationStyle style) {
  switch (style) {
    case CapitalizationStyle::kUppercase: return "uppercase";
    case CapitalizationStyle::kLowercase: return "lowercase";
    case CapitalizationStyle::kSentenceCase: return "sentence_case";
  }
  return "sentence_case";
}

CapitalizationStyle classify_capitalization(const std::string& post) {
  std::size_t cased = 0, upper = 0, lower = 0;
  for (char c : post) {
    if (!text::is_ascii_alpha(c)) continue;
    ++cased;
    if (c >= 'A' && c <= 'Z') {
      ++upper;
    } else {
      ++lower;
    }
  }
  if (cased == 0) return CapitalizationStyle::kSentenceCase;
  if (upper == cased) return CapitalizationStyle::kUppercase;
  if (lower == cased) return CapitalizationStyle::kLowercase;
  return CapitalizationStyle::kSentenceCase;
}

std::string apply_capitalization(const std::string& post, CapitalizationStyle style) {
  switch (style) {
    case CapitalizationStyle::kUppercase:
      return text::to_upper_ascii(post);
    case CapitalizationStyle::kLowercase:
      return text::to_lower_ascii(post);
    case CapitalizationStyle::kSentenceCase: {
      std::string out = text::to_lower_ascii(post);
      for (const auto& sentence : text::split_sentences(out)) {
        for (std::size_t i = sentence.begin; i < sentence.mark_begin; ++i) {
          if (text::is_ascii_alpha(out[i])) {
            out[i] = static_cast<char>(out[i] - 'a' + 'A');
            break;
          }
        }
      }
      return out;
    }
  }
  return post;
}

StyleDistribution StyleDistribution::from_counts(
    const std::vector<std::pair<std::string, std::size_t>>& counts) {
  StyleDistribution dist;
  std::size_t total = 0;
  for (const auto& [label, count] : counts) total += count;
  if (total == 0) throw std::invalid_argument("StyleDistribution: no observations");
  for (const auto& [label, count] : counts) {
    dist.labels.push_back(label);
    dist.probabilities.push_back(static_cast<double>(count) / static_cast<double>(total));
  }
  dist.validate();
  return dist;
}

void StyleDistribution::validate() const {
  if (labels.size() != probabilities.size() || labels.empty()) {
    throw std::invalid_argument("StyleDistribution: malformed");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("StyleDistribution: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("StyleDistribution: probabilities sum to " +
                                std::to_string(sum));
  }
}

const std::string& StyleDistribution::sample(SeededRng& rng) const {
  const double u = rng.unit();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return labels[i];
  }
  return labels.back();
}

namespace {

/// Builds counts in first-seen label order, keeping downstream sampling
/// deterministic.
class OrderedCounter {
 public:
  void add(const std::string& label) {
    auto it = index_.find(label);
    if (it == index_.end()) {
      index_.emplace(label, counts_.size());
      counts_.emplace_back(label, 1);
    } else {
      ++counts_[it->second].second;
    }
  }
  bool empty() const { return counts_.empty(); }
  const std::vector<std::pair<std::string, std::size_t>>& counts() const { return counts_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::size_t>> counts_;
};

struct Edit {
  std::size_t begin;
  std::size_t end;
  std::string replacement;
};

/// Applies non-overlapping edits left-to-right; out_spans receives the byte
/// span of each replacement in the output string, in edit order.
std::string apply_edits(const std::string& input, std::vector<Edit> edits,
                        std::vector<text::Span>* out_spans = nullptr) {
  std::stable_sort(edits.begin(), edits.end(),
                   [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  std::string out;
  out.reserve(input.size());
  std::size_t prev = 0;
  for (const auto& e : edits) {
    out.append(input, prev, e.begin - prev);
    if (out_spans) out_spans->push_back({out.size(), out.size() + e.replacement.size()});
    out += e.replacement;
    prev = e.end;
  }
  out.append(input, prev, std::string::npos);
  return out;
}

}  // namespace

std::vector<std::string> capi_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed) {
  std::vector<std::pair<std::string, std::size_t>> counts = {
      {to_string(CapitalizationStyle::kUppercase), 0},
      {to_string(CapitalizationStyle::kLowercase), 0},
      {to_string(CapitalizationStyle::kSentenceCase), 0}};
  for (const auto& post : target) {
    ++counts[static_cast<std::size_t>(classify_capitalization(post))].second;
  }
  std::erase_if(counts, [](const auto& c) { return c.second == 0; });
  const StyleDistribution dist = StyleDistribution::from_counts(counts);

  std::vector<std::string> out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    SeededRng rng(SeededRng::derive(seed, i));
    const std::string& label = dist.sample(rng);
    CapitalizationStyle style = CapitalizationStyle::kSentenceCase;
    if (label == to_string(CapitalizationStyle::kUppercase)) {
      style = CapitalizationStyle::kUppercase;
    } else if (label == to_string(CapitalizationStyle::kLowercase)) {
      style = CapitalizationStyle::kLowercase;
    }
    out.push_back(apply_capitalization(source[i], style));
  }
  return out;
}

std::vector<std::string> cont_posts(std::span<const std::string> source,
                                    std::span<const std::string> target,
                                    const ContractionTable& table, std::uint64_t seed) {
  if (table.size() == 0) throw std::runtime_error("cont: contraction table is empty");
  std::size_t using_contractions = 0;
  for (const auto& post : target) {
    if (table.has_contraction(post)) ++using_contractions;
  }
  const double p = target.empty()
                       ? 0.0
                       : static_cast<double>(using_contractions) / static_cast<double>(target.size());

  std::vector<std::string> out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    SeededRng rng(SeededRng::derive(seed, i));
    out.push_back(rng.bernoulli(p) ? table.contract_all(source[i])
                                   : table.expand_all(source[i]));
  }
  return out;
}

namespace {

bool content_pos(PosTag tag) {
  return tag == PosTag::kNoun || tag == PosTag::kPropn || tag == PosTag::kVerb ||
         tag == PosTag::kAdj || tag == PosTag::kAdv;
}

struct SynonymCandidate {
  std::size_t order;
  std::string surface;
  std::string lemma;
};

}  // namespace

std::vector<std::string> synm_posts(std::span<const std::string> source,
                                    std::span<const std::string> target,
                                    const Toolkit& toolkit) {
  if (!toolkit.lexicon) throw std::runtime_error("synm: synonym lexicon unavailable");
  const Tokenizer& tokenizer = *toolkit.tokenizer;
  const PosTagger& tagger = *toolkit.tagger;
  const Morphology& morphology = *toolkit.morphology;

  // First qualifying target token in target order wins, indexed by
  // (pos, synset).
  std::map<std::pair<PosTag, std::string>, SynonymCandidate> first_by_synset;
  std::size_t order = 0;
  for (const auto& post : target) {
    const auto tokens = tokenizer.tokenize(post);
    const auto tags = tagger.tag(tokens);
    for (std::size_t i = 0; i < tokens.size(); ++i, ++order) {
      if (tokens[i].kind != Token::Kind::kWord || !content_pos(tags[i])) continue;
      const std::string lemma = morphology.lemma(tokens[i].surface, tags[i]);
      for (const auto& synset : toolkit.lexicon->synsets(lemma, tags[i])) {
        const auto key = std::make_pair(tags[i], synset);
        auto it = first_by_synset.find(key);
        if (it == first_by_synset.end()) {
          first_by_synset.emplace(key, SynonymCandidate{order, tokens[i].surface, lemma});
        }
      }
    }
  }

  std::vector<std::string> out;
  out.reserve(source.size());
  for (const auto& post : source) {
    const auto tokens = tokenizer.tokenize(post);
    const auto tags = tagger.tag(tokens);
    std::vector<Edit> edits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].kind != Token::Kind::kWord || !content_pos(tags[i])) continue;
      const std::string lemma = morphology.lemma(tokens[i].surface, tags[i]);
      const SynonymCandidate* best = nullptr;
      for (const auto& synset : toolkit.lexicon->synsets(lemma, tags[i])) {
        auto it = first_by_synset.find({tags[i], synset});
        if (it != first_by_synset.end() && (!best || it->second.order < best->order)) {
          best = &it->second;
        }
      }
      if (!best || best->lemma.find(' ') != std::string::npos) continue;
      const std::string replacement =
          morphology.match_form(tokens[i].surface, lemma, best->lemma, tags[i]);
      if (replacement != tokens[i].surface) {
        edits.push_back({tokens[i].begin, tokens[i].end, replacement});
      }
    }
    out.push_back(apply_edits(post, std::move(edits)));
  }
  return out;
}

std::vector<std::string> punc_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed,
                                    std::vector<std::string>* warnings) {
  OrderedCounter counter;
  for (const auto& post : target) {
    for (const auto& s : text::split_sentences(post)) {
      const std::string mark = post.substr(s.mark_begin, s.mark_end - s.mark_begin);
      counter.add(mark.empty() ? "none" : mark);
    }
  }
  if (counter.empty()) {
    if (warnings) warnings->push_back("target posts contain no sentences; punc is a no-op");
    return {source.begin(), source.end()};
  }
  const StyleDistribution dist = StyleDistribution::from_counts(counter.counts());

  std::vector<std::string> out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    SeededRng rng(SeededRng::derive(seed, i));
    std::vector<Edit> edits;
    for (const auto& s : text::split_sentences(source[i])) {
      const std::string& label = dist.sample(rng);
      edits.push_back({s.mark_begin, s.mark_end, label == "none" ? "" : label});
    }
    out.push_back(apply_edits(source[i], std::move(edits)));
  }
  return out;
}

namespace {

bool all_end_marks(std::string_view chunk) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    const std::size_t len = text::end_mark_len(chunk, i);
    if (len == 0) return false;
    i += len;
  }
  return i == chunk.size();
}

bool is_distinctive_chunk(std::string_view chunk) {
  if (all_end_marks(chunk)) return false;
  if (!text::is_ascii(chunk)) return true;
  if (chunk.size() < 2) return false;
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    if (!text::is_ascii_punct(chunk[i])) return false;
    if (text::end_mark_len(chunk, i) > 0) return false;
  }
  return true;
}

}  // namespace

std::vector<DistinctiveToken> distinctive_tokens(std::span<const std::string> posts) {
  OrderedCounter counter;
  for (const auto& post : posts) {
    for (const auto& span : text::whitespace_chunks(post)) {
      const std::string_view chunk = std::string_view(post).substr(span.begin, span.size());
      if (is_distinctive_chunk(chunk)) counter.add(std::string(chunk));
    }
  }
  std::vector<DistinctiveToken> out;
  for (const auto& [surface, count] : counter.counts()) {
    out.push_back({surface, static_cast<double>(count) / static_cast<double>(posts.size())});
  }
  return out;
}

std::vector<std::string> emoj_posts(std::span<const std::string> source,
                                    std::span<const std::string> target, std::uint64_t seed,
                                    std::vector<EmojInjection>* injections) {
  const std::vector<DistinctiveToken> tokens = distinctive_tokens(target);
  std::vector<std::string> out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (tokens.empty()) {
      out.push_back(source[i]);
      continue;
    }
    SeededRng rng(SeededRng::derive(seed, i));
    const std::string& post = source[i];

    // Candidate insertion points: each sentence boundary plus the post end.
    std::vector<std::size_t> boundaries;
    for (const auto& s : text::split_sentences(post)) boundaries.push_back(s.mark_end);
    if (boundaries.empty() || boundaries.back() != post.size()) {
      boundaries.push_back(post.size());
    }

    std::vector<Edit> edits;
    for (const auto& token : tokens) {
      const double expected = token.per_post_frequency;
      std::size_t n = static_cast<std::size_t>(std::floor(expected));
      if (rng.bernoulli(expected - std::floor(expected))) ++n;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t at = boundaries[rng.below(boundaries.size())];
        edits.push_back({at, at, " " + token.surface});
      }
    }
    std::vector<text::Span> spans;
    out.push_back(apply_edits(post, std::move(edits), &spans));
    if (injections) {
      for (const auto& span : spans) injections->push_back({i, span.begin, span.end});
    }
  }
  return out;
}

namespace {

TokenEmbeddingEntry finalize_entry(const Eigen::VectorXd& sum,
                                   const std::vector<std::pair<PosTag, std::size_t>>& pos_counts,
                                   std::size_t count) {
  TokenEmbeddingEntry entry;
  entry.count = count;
  entry.mean = sum / static_cast<double>(count);
  std::size_t best = 0;
  for (const auto& [tag, n] : pos_counts) {
    if (n > best) {
      best = n;
      entry.pos = tag;
    }
  }
  return entry;
}

}  // namespace

TokenEmbeddingTable build_token_embedding_table(std::span<const std::string> posts,
                                                const Tokenizer& tokenizer,
                                                const PosTagger& tagger,
                                                const TokenEmbeddingProvider& provider) {
  struct Accumulator {
    Eigen::VectorXd sum;
    std::vector<std::pair<PosTag, std::size_t>> pos_counts;
    std::size_t count = 0;
  };
  std::map<std::string, Accumulator> acc;
  for (const auto& post : posts) {
    const auto tokens = tokenizer.tokenize(post);
    const auto tags = tagger.tag(tokens);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].kind == Token::Kind::kOther) continue;
      auto [it, inserted] = acc.try_emplace(tokens[i].surface);
      auto& a = it->second;
      const Eigen::VectorXd v = provider.embed(post, tokens, i);
      if (inserted) {
        a.sum = v;
      } else {
        a.sum += v;
      }
      ++a.count;
      auto pc = std::find_if(a.pos_counts.begin(), a.pos_counts.end(),
                             [&](const auto& p) { return p.first == tags[i]; });
      if (pc == a.pos_counts.end()) {
        a.pos_counts.emplace_back(tags[i], 1);
      } else {
        ++pc->second;
      }
    }
  }
  TokenEmbeddingTable table;
  for (const auto& [surface, a] : acc) {
    table.emplace(surface, finalize_entry(a.sum, a.pos_counts, a.count));
  }
  return table;
}

std::vector<std::string> embed_swap_posts(std::span<const std::string> source,
                                          std::span<const std::string> target,
                                          const Toolkit& toolkit, double threshold) {
  if (!toolkit.embeddings) throw std::runtime_error("embed-swap: embedding provider unavailable");
  const Tokenizer& tokenizer = *toolkit.tokenizer;
  const PosTagger& tagger = *toolkit.tagger;
  const TokenEmbeddingTable source_table =
      build_token_embedding_table(source, tokenizer, tagger, *toolkit.embeddings);
  const TokenEmbeddingTable target_table =
      build_token_embedding_table(target, tokenizer, tagger, *toolkit.embeddings);

  // Per source token type: best same-POS target type by cosine; ties broken
  // by higher target count, then lexicographic surface (map iteration order).
  std::map<std::string, std::string> replacement;
  for (const auto& [surface, entry] : source_table) {
    if (never_swapped(entry.pos)) continue;
    const double src_norm = entry.mean.norm();
    if (!(src_norm > 0.0)) continue;
    const std::string* best_surface = nullptr;
    double best_cos = -2.0;
    std::size_t best_count = 0;
    for (const auto& [tgt_surface, tgt_entry] : target_table) {
      if (tgt_entry.pos != entry.pos) continue;
      const double tgt_norm = tgt_entry.mean.norm();
      if (!(tgt_norm > 0.0)) continue;
      const double cos = entry.mean.dot(tgt_entry.mean) / (src_norm * tgt_norm);
      if (cos > best_cos || (cos == best_cos && tgt_entry.count > best_count)) {
        best_cos = cos;
        best_count = tgt_entry.count;
        best_surface = &tgt_surface;
      }
    }
    if (!best_surface || best_cos < threshold) continue;
    if (entry.pos == PosTag::kPunct) {
      replacement[surface] = *best_surface;
    } else {
      const std::string lemma = toolkit.morphology->lemma(surface, entry.pos);
      const std::string tgt_lemma = toolkit.morphology->lemma(*best_surface, entry.pos);
      replacement[surface] = toolkit.morphology->match_form(surface, lemma, tgt_lemma, entry.pos);
    }
  }

  std::vector<std::string> out;
  out.reserve(source.size());
  for (const auto& post : source) {
    const auto tokens = tokenizer.tokenize(post);
    std::vector<Edit> edits;
    for (const auto& tok : tokens) {
      if (tok.kind == Token::Kind::kOther) continue;
      auto it = replacement.find(tok.surface);
      if (it != replacement.end() && it->second != tok.surface) {
        edits.push_back({tok.begin, tok.end, it->second});
      }
    }
    out.push_back(apply_edits(post, std::move(edits)));
  }
  return out;
}

namespace {

TransferResult make_result(const TransferPair& pair, const std::string& method,
                           std::vector<std::string> outputs, nlohmann::json config) {
  TransferResult r;
  r.pair = pair;
  r.method = method;
  r.outputs = std::move(outputs);
  r.config = std::move(config);
  r.trace.posts.resize(r.outputs.size());
  return r;
}

}  // namespace

TransferResult copy_src(const TransferPair& pair) {
  return make_result(pair, methods::kCopySrc, pair.source.post_texts(), {});
}

TransferResult copy_tgt(const TransferPair& pair) {
  return make_result(pair, methods::kCopyTgt, pair.target.post_texts(), {});
}

TransferResult capi_baseline(const TransferPair& pair, std::uint64_t seed) {
  return make_result(pair, methods::kCapi,
                     capi_posts(pair.source.post_texts(), pair.target.post_texts(), seed),
                     {{"seed", seed}});
}

TransferResult cont_baseline(const TransferPair& pair, const ContractionTable& table,
                             std::uint64_t seed) {
  return make_result(pair, methods::kCont,
                     cont_posts(pair.source.post_texts(), pair.target.post_texts(), table, seed),
                     {{"seed", seed}});
}

TransferResult synm_baseline(const TransferPair& pair, const Toolkit& toolkit) {
  return make_result(pair, methods::kSynm,
                     synm_posts(pair.source.post_texts(), pair.target.post_texts(), toolkit),
                     {});
}

TransferResult punc_baseline(const TransferPair& pair, std::uint64_t seed) {
  std::vector<std::string> warnings;
  auto outputs = punc_posts(pair.source.post_texts(), pair.target.post_texts(), seed, &warnings);
  nlohmann::json config = {{"seed", seed}};
  if (!warnings.empty()) config["warnings"] = warnings;
  return make_result(pair, methods::kPunc, std::move(outputs), std::move(config));
}

TransferResult emoj_baseline(const TransferPair& pair, std::uint64_t seed) {
  return make_result(pair, methods::kEmoj,
                     emoj_posts(pair.source.post_texts(), pair.target.post_texts(), seed),
                     {{"seed", seed}});
}

TransferResult ling_baseline(const TransferPair& pair, const Toolkit& toolkit,
                             std::uint64_t seed) {
  const auto target = pair.target.post_texts();
  std::vector<std::string> posts = pair.source.post_texts();
  posts = synm_posts(posts, target, toolkit);
  posts = cont_posts(posts, target, toolkit.contractions,
                     SeededRng::derive(seed, ling_streams::kCont));
  posts = capi_posts(posts, target, SeededRng::derive(seed, ling_streams::kCapi));
  posts = punc_posts(posts, target, SeededRng::derive(seed, ling_streams::kPunc));
  posts = emoj_posts(posts, target, SeededRng::derive(seed, ling_streams::kEmoj));
  return make_result(pair, methods::kLing, std::move(posts), {{"seed", seed}});
}

TransferResult embed_swap_baseline(const TransferPair& pair, const Toolkit& toolkit,
                                   double threshold) {
  return make_result(
      pair, methods::kEmbedSwap,
      embed_swap_posts(pair.source.post_texts(), pair.target.post_texts(), toolkit, threshold),
      {{"threshold", threshold}});
}

}  // namespace styll

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace styll {

/// Universal POS tagset (the subset the baselines care about). AUX, ADP and
/// PART matter specifically: those tokens are never lexically swapped.
enum class PosTag {
  kNoun,
  kPropn,
  kVerb,
  kAdj,
  kAdv,
  kPron,
  kDet,
  kAdp,
  kAux,
  kPart,
  kCconj,
  kSconj,
  kNum,
  kPunct,
  kIntj,
  kSym,
  kX,
};

std::string to_string(PosTag tag);
PosTag pos_tag_from_string(const std::string& s);
bool never_swapped(PosTag tag);

struct Token {
  enum class Kind { kWord, kPunct, kOther };
  std::string surface;
  std::size_t begin = 0;
  std::size_t end = 0;
  Kind kind = Kind::kWord;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<Token> tokenize(const std::string& text) const = 0;
};

/// Offset-preserving tokenizer: ASCII words (with interior apostrophes and
/// hyphens), ASCII punctuation runs, and non-ASCII byte runs. Splicing
/// replacements back by offset reconstructs the surrounding text exactly.
class SimpleTokenizer : public Tokenizer {
 public:
  std::vector<Token> tokenize(const std::string& text) const override;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  /// Tags aligned index-for-index with tokens.
  virtual std::vector<PosTag> tag(std::span<const Token> tokens) const = 0;
};

/// Deterministic lexicon-and-suffix tagger: closed-class word lists decide
/// function words (including AUX/ADP/PART), suffix heuristics split the rest
/// into NOUN/VERB/ADJ/ADV. Approximate by construction; swap in a model
/// tagger through the PosTagger interface for production tagging.
class RuleBasedTagger : public PosTagger {
 public:
  RuleBasedTagger();
  std::vector<PosTag> tag(std::span<const Token> tokens) const override;

 private:
  std::unordered_map<std::string, PosTag> closed_class_;
};

class SynonymLexicon {
 public:
  virtual ~SynonymLexicon() = default;
  /// Synset ids containing (lemma, pos); empty when the lemma is unknown.
  virtual std::vector<std::string> synsets(const std::string& lemma, PosTag pos) const = 0;
};

/// Lexicon over explicit (lemma, pos) -> synset rows. from_file reads
/// tab-separated "lemma<TAB>pos<TAB>synset_id" lines; builtin() ships a small
/// starter table of common English synonym groups so the lexical baselines
/// work out of the box.
class TableLexicon : public SynonymLexicon {
 public:
  TableLexicon() = default;
  static TableLexicon builtin();
  static TableLexicon from_file(const std::filesystem::path& path);
  void add(const std::string& lemma, PosTag pos, const std::string& synset_id);
  std::vector<std::string> synsets(const std::string& lemma, PosTag pos) const override;

 private:
  std::map<std::pair<std::string, PosTag>, std::vector<std::string>> table_;
};

/// Canonical contraction <-> expansion pairs. Matching is word-boundary
/// aware, case-insensitive, and treats the typographic apostrophe as the
/// ASCII one; replacements preserve the original casing pattern.
class ContractionTable {
 public:
  static ContractionTable builtin();
  /// Two-column text file: "contraction<TAB>expansion", lowercase.
  static ContractionTable from_file(const std::filesystem::path& path);

  void add(const std::string& contraction, const std::string& expansion);
  std::string expand_all(const std::string& text) const;
  std::string contract_all(const std::string& text) const;
  bool has_contraction(const std::string& text) const;
  std::size_t size() const { return pairs_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;  // (contraction, expansion)
};

/// Lemmatization and inflection matching. The default implementation uses
/// English suffix rules plus a small irregular table; it is intentionally
/// approximate and replaceable.
class Morphology {
 public:
  virtual ~Morphology() = default;
  virtual std::string lemma(const std::string& surface, PosTag pos) const = 0;
  /// Re-inflects replacement_lemma to the morphological form of
  /// original_surface (plural, 3rd-person -s, -ing, -ed, -er/-est) and
  /// matches its casing pattern.
  virtual std::string match_form(const std::string& original_surface,
                                 const std::string& original_lemma,
                                 const std::string& replacement_lemma, PosTag pos) const = 0;
};

class EnglishMorphology : public Morphology {
 public:
  EnglishMorphology();
  std::string lemma(const std::string& surface, PosTag pos) const override;
  std::string match_form(const std::string& original_surface, const std::string& original_lemma,
                         const std::string& replacement_lemma, PosTag pos) const override;

 private:
  std::unordered_map<std::string, std::string> irregular_;
};

/// Applies original's casing pattern (ALL CAPS, Capitalized, lowercase) to
/// replacement. Mixed-case originals leave the replacement as given.
std::string match_case(const std::string& original, const std::string& replacement);

/// Contextual token embeddings for the embedding-swap baseline.
class TokenEmbeddingProvider {
 public:
  virtual ~TokenEmbeddingProvider() = default;
  virtual Eigen::Index dim() const = 0;
  /// Vector for tokens[index] of a tokenized post. Providers without real
  /// context may ignore everything but the token surface.
  virtual Eigen::VectorXd embed(const std::string& post, std::span<const Token> tokens,
                                std::size_t index) const = 0;
};

/// Deterministic context-free provider hashing character trigrams of the
/// lowercased surface, signed-bucket style. Stands in for a contextual model
/// in tests and offline runs.
class HashTokenEmbedding : public TokenEmbeddingProvider {
 public:
  explicit HashTokenEmbedding(Eigen::Index dim = 64) : dim_(dim) {}
  Eigen::Index dim() const override { return dim_; }
  Eigen::VectorXd embed(const std::string& post, std::span<const Token> tokens,
                        std::size_t index) const override;

 private:
  Eigen::Index dim_;
};

/// Fixture provider with hand-set vectors per lowercased surface; unknown
/// surfaces embed to zero (and are never swapped).
class FixedTokenEmbedding : public TokenEmbeddingProvider {
 public:
  explicit FixedTokenEmbedding(Eigen::Index dim) : dim_(dim) {}
  void set(const std::string& surface, Eigen::VectorXd v);
  Eigen::Index dim() const override { return dim_; }
  Eigen::VectorXd embed(const std::string& post, std::span<const Token> tokens,
                        std::size_t index) const override;

 private:
  Eigen::Index dim_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

}  // namespace styll

#include "styll/toolkit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "styll/text.hpp"

namespace styll {

std::string to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kPropn: return "PROPN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kPron: return "PRON";
    case PosTag::kDet: return "DET";
    case PosTag::kAdp: return "ADP";
    case PosTag::kAux: return "AUX";
    case PosTag::kPart: return "PART";
    case PosTag::kCconj: return "CCONJ";
    case PosTag::kSconj: return "SCONJ";
    case PosTag::kNum: return "NUM";
    case PosTag::kPunct: return "PUNCT";
    case PosTag::kIntj: return "INTJ";
    case PosTag::kSym: return "SYM";
    case PosTag::kX: return "X";
  }
  return "X";
}

PosTag pos_tag_from_string(const std::string& s) {
  static const std::unordered_map<std::string, PosTag> map = {
      {"NOUN", PosTag::kNoun}, {"PROPN", PosTag::kPropn}, {"VERB", PosTag::kVerb},
      {"ADJ", PosTag::kAdj},   {"ADV", PosTag::kAdv},     {"PRON", PosTag::kPron},
      {"DET", PosTag::kDet},   {"ADP", PosTag::kAdp},     {"AUX", PosTag::kAux},
      {"PART", PosTag::kPart}, {"CCONJ", PosTag::kCconj}, {"SCONJ", PosTag::kSconj},
      {"NUM", PosTag::kNum},   {"PUNCT", PosTag::kPunct}, {"INTJ", PosTag::kIntj},
      {"SYM", PosTag::kSym},   {"X", PosTag::kX}};
  auto it = map.find(s);
  if (it == map.end()) throw std::invalid_argument("unknown POS tag: " + s);
  return it->second;
}

bool never_swapped(PosTag tag) {
  return tag == PosTag::kAux || tag == PosTag::kAdp || tag == PosTag::kPart;
}

namespace {

bool is_word_byte(char c) { return text::is_ascii_alnum(c) || c == '_'; }

bool is_word_connector(std::string_view s, std::size_t i) {
  // Apostrophe or hyphen between word bytes stays inside the token.
  if (i == 0 || i + 1 >= s.size()) return false;
  const char c = s[i];
  if (c != '\'' && c != '-') return false;
  return is_word_byte(s[i - 1]) && is_word_byte(s[i + 1]);
}

}  // namespace

std::vector<Token> SimpleTokenizer::tokenize(const std::string& input) const {
  std::vector<Token> out;
  const std::string_view s = input;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char u = static_cast<unsigned char>(s[i]);
    if (u < 0x80 && text::is_ascii_space(s[i])) {
      ++i;
      continue;
    }
    Token tok;
    tok.begin = i;
    if (u >= 0x80) {
      tok.kind = Token::Kind::kOther;
      while (i < s.size() && static_cast<unsigned char>(s[i]) >= 0x80) ++i;
    } else if (is_word_byte(s[i])) {
      tok.kind = Token::Kind::kWord;
      while (i < s.size() && static_cast<unsigned char>(s[i]) < 0x80 &&
             (is_word_byte(s[i]) || is_word_connector(s, i))) {
        ++i;
      }
    } else {
      tok.kind = Token::Kind::kPunct;
      while (i < s.size() && static_cast<unsigned char>(s[i]) < 0x80 &&
             text::is_ascii_punct(s[i]) && !is_word_byte(s[i])) {
        ++i;
      }
    }
    tok.end = i;
    tok.surface = input.substr(tok.begin, tok.end - tok.begin);
    out.push_back(std::move(tok));
  }
  return out;
}

RuleBasedTagger::RuleBasedTagger() {
  auto put = [&](std::initializer_list<const char*> words, PosTag tag) {
    for (const char* w : words) closed_class_.emplace(w, tag);
  };
  put({"am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
       "do", "does", "did", "will", "would", "shall", "should", "may", "might", "must",
       "can", "could"},
      PosTag::kAux);
  put({"in", "on", "at", "by", "for", "with", "about", "against", "between", "into",
       "through", "during", "before", "after", "above", "below", "from", "up", "down",
       "over", "under", "of", "off", "near", "across", "behind", "beyond", "without",
       "within", "along", "around", "upon"},
      PosTag::kAdp);
  put({"to", "not", "n't"}, PosTag::kPart);
  put({"the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her",
       "its", "our", "their", "some", "any", "no", "every", "each", "either", "neither",
       "both", "all"},
      PosTag::kDet);
  put({"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "myself",
       "yourself", "himself", "herself", "itself", "ourselves", "themselves", "who",
       "whom", "what", "which", "someone", "something", "anyone", "anything", "everyone",
       "everything", "nobody", "nothing"},
      PosTag::kPron);
  put({"and", "or", "but", "nor", "so", "yet"}, PosTag::kCconj);
  put({"if", "because", "while", "although", "though", "when", "whenever", "since",
       "unless", "until", "whereas"},
      PosTag::kSconj);
  put({"oh", "wow", "hey", "hi", "hello", "yeah", "yes", "ok", "okay", "hmm", "ugh",
       "lol"},
      PosTag::kIntj);
  put({"very", "too", "quite", "rather", "really", "always", "never", "often",
       "sometimes", "here", "there", "now", "then", "soon", "already", "still", "just",
       "also", "again", "maybe", "perhaps"},
      PosTag::kAdv);
}

std::vector<PosTag> RuleBasedTagger::tag(std::span<const Token> tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (tok.kind == Token::Kind::kPunct) {
      tags.push_back(PosTag::kPunct);
      continue;
    }
    if (tok.kind == Token::Kind::kOther) {
      tags.push_back(PosTag::kSym);
      continue;
    }
    const std::string lower = text::to_lower_ascii(tok.surface);
    if (auto it = closed_class_.find(lower); it != closed_class_.end()) {
      tags.push_back(it->second);
      continue;
    }
    if (!lower.empty() && lower.find_first_not_of("0123456789.,-") == std::string::npos &&
        lower.find_first_of("0123456789") != std::string::npos) {
      tags.push_back(PosTag::kNum);
      continue;
    }
    auto ends_with = [&](std::string_view suffix) {
      return lower.size() > suffix.size() &&
             lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("ly")) {
      tags.push_back(PosTag::kAdv);
    } else if (ends_with("ing") || ends_with("ed")) {
      tags.push_back(PosTag::kVerb);
    } else if (ends_with("ous") || ends_with("ful") || ends_with("ive") ||
               ends_with("able") || ends_with("ible") || ends_with("al")) {
      tags.push_back(PosTag::kAdj);
    } else {
      tags.push_back(PosTag::kNoun);
    }
  }
  return tags;
}

TableLexicon TableLexicon::builtin() {
  TableLexicon lex;
  // Starter synonym groups; load a WordNet-derived file for real coverage.
  struct Group {
    const char* synset;
    PosTag pos;
    std::initializer_list<const char*> lemmas;
  };
  const Group groups[] = {
      {"big.a.01", PosTag::kAdj, {"big", "large", "huge"}},
      {"small.a.01", PosTag::kAdj, {"small", "little", "tiny"}},
      {"good.a.01", PosTag::kAdj, {"good", "great", "fine"}},
      {"bad.a.01", PosTag::kAdj, {"bad", "awful", "terrible"}},
      {"happy.a.01", PosTag::kAdj, {"happy", "glad", "cheerful"}},
      {"sad.a.01", PosTag::kAdj, {"sad", "unhappy", "gloomy"}},
      {"fast.a.01", PosTag::kAdj, {"fast", "quick", "rapid", "speedy"}},
      {"slow.a.01", PosTag::kAdj, {"slow", "sluggish"}},
      {"smart.a.01", PosTag::kAdj, {"smart", "clever", "intelligent"}},
      {"pretty.a.01", PosTag::kAdj, {"pretty", "beautiful", "lovely"}},
      {"odd.a.01", PosTag::kAdj, {"odd", "strange", "weird"}},
      {"hard.a.01", PosTag::kAdj, {"hard", "difficult", "tough"}},
      {"easy.a.01", PosTag::kAdj, {"easy", "simple"}},
      {"begin.v.01", PosTag::kVerb, {"begin", "start", "commence"}},
      {"end.v.01", PosTag::kVerb, {"end", "finish", "conclude"}},
      {"speak.v.01", PosTag::kVerb, {"speak", "talk"}},
      {"look.v.01", PosTag::kVerb, {"look", "glance", "peek"}},
      {"like.v.01", PosTag::kVerb, {"like", "enjoy"}},
      {"make.v.01", PosTag::kVerb, {"make", "create", "build"}},
      {"get.v.01", PosTag::kVerb, {"get", "obtain", "receive"}},
      {"think.v.01", PosTag::kVerb, {"think", "believe", "reckon"}},
      {"house.n.01", PosTag::kNoun, {"house", "home", "dwelling"}},
      {"car.n.01", PosTag::kNoun, {"car", "automobile", "vehicle"}},
      {"dog.n.01", PosTag::kNoun, {"dog", "hound"}},
      {"cat.n.01", PosTag::kNoun, {"cat", "feline"}},
      {"friend.n.01", PosTag::kNoun, {"friend", "pal", "buddy"}},
      {"movie.n.01", PosTag::kNoun, {"movie", "film"}},
      {"game.n.01", PosTag::kNoun, {"game", "match"}},
      {"job.n.01", PosTag::kNoun, {"job", "work", "occupation"}},
      {"money.n.01", PosTag::kNoun, {"money", "cash"}},
      {"maybe.r.01", PosTag::kAdv, {"maybe", "perhaps", "possibly"}},
      {"quickly.r.01", PosTag::kAdv, {"quickly", "rapidly", "swiftly"}},
  };
  for (const auto& g : groups) {
    for (const char* lemma : g.lemmas) lex.add(lemma, g.pos, g.synset);
  }
  return lex;
}

TableLexicon TableLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synonym lexicon: " + path.string());
  TableLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string lemma, pos, synset;
    if (!std::getline(row, lemma, '\t') || !std::getline(row, pos, '\t') ||
        !std::getline(row, synset, '\t')) {
      throw std::runtime_error("lexicon " + path.string() + " line " +
                               std::to_string(line_no) + ": expected lemma<TAB>pos<TAB>synset");
    }
    lex.add(text::to_lower_ascii(text::trim(lemma)), pos_tag_from_string(text::trim(pos)),
            text::trim(synset));
  }
  return lex;
}

void TableLexicon::add(const std::string& lemma, PosTag pos, const std::string& synset_id) {
  auto& list = table_[{lemma, pos}];
  if (std::find(list.begin(), list.end(), synset_id) == list.end()) {
    list.push_back(synset_id);
  }
}

std::vector<std::string> TableLexicon::synsets(const std::string& lemma, PosTag pos) const {
  auto it = table_.find({lemma, pos});
  return it == table_.end() ? std::vector<std::string>{} : it->second;
}

namespace {

// Typographic apostrophe U+2019 = E2 80 99.
bool apostrophe_at(std::string_view s, std::size_t i, std::size_t* len) {
  if (i < s.size() && s[i] == '\'') {
    *len = 1;
    return true;
  }
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      static_cast<unsigned char>(s[i + 2]) == 0x99) {
    *len = 3;
    return true;
  }
  return false;
}

/// Case-insensitive match of `pattern` (lowercase, ASCII apostrophes) at
/// text[pos]; either apostrophe form matches. Returns matched byte length or
/// 0.
std::size_t match_pattern(std::string_view text_sv, std::size_t pos, std::string_view pattern) {
  std::size_t i = pos;
  for (std::size_t p = 0; p < pattern.size(); ++p) {
    if (i >= text_sv.size()) return 0;
    if (pattern[p] == '\'') {
      std::size_t len = 0;
      if (!apostrophe_at(text_sv, i, &len)) return 0;
      i += len;
      continue;
    }
    char c = text_sv[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != pattern[p]) return 0;
    ++i;
  }
  return i - pos;
}

bool boundary_before(std::string_view s, std::size_t pos) {
  if (pos == 0) return true;
  const char c = s[pos - 1];
  return !(text::is_ascii_alnum(c) || c == '\'');
}

bool boundary_after(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return true;
  const char c = s[pos];
  std::size_t len = 0;
  if (apostrophe_at(s, pos, &len)) return false;
  return !text::is_ascii_alnum(c);
}

std::string replace_phrases(const std::string& input,
                            const std::vector<std::pair<std::string, std::string>>& mapping) {
  // Longest pattern first so "will not" beats "not", etc.
  std::vector<const std::pair<std::string, std::string>*> ordered;
  ordered.reserve(mapping.size());
  for (const auto& p : mapping) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->first.size() > b->first.size(); });

  const std::string_view s = input;
  std::string out;
  out.reserve(input.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t matched_len = 0;
    const std::pair<std::string, std::string>* matched = nullptr;
    if (boundary_before(s, i)) {
      for (const auto* entry : ordered) {
        const std::size_t len = match_pattern(s, i, entry->first);
        if (len > 0 && boundary_after(s, i + len)) {
          matched = entry;
          matched_len = len;
          break;
        }
      }
    }
    if (matched) {
      out += match_case(input.substr(i, matched_len), matched->second);
      i += matched_len;
    } else {
      out += s[i];
      ++i;
    }
  }
  return out;
}

}  // namespace

std::string match_case(const std::string& original, const std::string& replacement) {
  std::size_t alpha = 0, upper = 0;
  char first_alpha = '\0';
  for (char c : original) {
    if (text::is_ascii_alpha(c)) {
      if (alpha == 0) first_alpha = c;
      ++alpha;
      if (c >= 'A' && c <= 'Z') ++upper;
    }
  }
  if (alpha == 0) return replacement;
  if (upper == alpha && alpha >= 2) return text::to_upper_ascii(replacement);
  if (first_alpha >= 'A' && first_alpha <= 'Z') {
    std::string out = replacement;
    for (char& c : out) {
      if (text::is_ascii_alpha(c)) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        break;
      }
    }
    return out;
  }
  return replacement;
}

ContractionTable ContractionTable::builtin() {
  ContractionTable t;
  const std::pair<const char*, const char*> rows[] = {
      {"can't", "cannot"},       {"won't", "will not"},     {"don't", "do not"},
      {"doesn't", "does not"},   {"didn't", "did not"},     {"isn't", "is not"},
      {"aren't", "are not"},     {"wasn't", "was not"},     {"weren't", "were not"},
      {"hasn't", "has not"},     {"haven't", "have not"},   {"hadn't", "had not"},
      {"wouldn't", "would not"}, {"shouldn't", "should not"}, {"couldn't", "could not"},
      {"mustn't", "must not"},   {"needn't", "need not"},   {"i'm", "i am"},
      {"i've", "i have"},        {"i'll", "i will"},        {"i'd", "i would"},
      {"you're", "you are"},     {"you've", "you have"},    {"you'll", "you will"},
      {"you'd", "you would"},    {"he's", "he is"},         {"he'll", "he will"},
      {"he'd", "he would"},      {"she's", "she is"},       {"she'll", "she will"},
      {"she'd", "she would"},    {"it's", "it is"},         {"it'll", "it will"},
      {"we're", "we are"},       {"we've", "we have"},      {"we'll", "we will"},
      {"we'd", "we would"},      {"they're", "they are"},   {"they've", "they have"},
      {"they'll", "they will"},  {"they'd", "they would"},  {"that's", "that is"},
      {"there's", "there is"},   {"here's", "here is"},     {"what's", "what is"},
      {"who's", "who is"},       {"let's", "let us"},       {"y'all", "you all"},
  };
  for (const auto& [c, e] : rows) t.add(c, e);
  return t;
}

ContractionTable ContractionTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open contraction table: " + path.string());
  ContractionTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("contraction table " + path.string() + " line " +
                               std::to_string(line_no) + ": expected contraction<TAB>expansion");
    }
    t.add(text::to_lower_ascii(text::trim(line.substr(0, tab))),
          text::to_lower_ascii(text::trim(line.substr(tab + 1))));
  }
  return t;
}

void ContractionTable::add(const std::string& contraction, const std::string& expansion) {
  pairs_.emplace_back(contraction, expansion);
}

std::string ContractionTable::expand_all(const std::string& input) const {
  return replace_phrases(input, pairs_);
}

std::string ContractionTable::contract_all(const std::string& input) const {
  std::vector<std::pair<std::string, std::string>> reversed;
  reversed.reserve(pairs_.size());
  for (const auto& [c, e] : pairs_) reversed.emplace_back(e, c);
  return replace_phrases(input, reversed);
}

bool ContractionTable::has_contraction(const std::string& input) const {
  const std::string_view s = input;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!boundary_before(s, i)) continue;
    for (const auto& [c, e] : pairs_) {
      const std::size_t len = match_pattern(s, i, c);
      if (len > 0 && boundary_after(s, i + len)) return true;
    }
  }
  return false;
}

EnglishMorphology::EnglishMorphology() {
  irregular_ = {
      {"went", "go"},       {"gone", "go"},     {"was", "be"},      {"were", "be"},
      {"is", "be"},         {"are", "be"},      {"am", "be"},       {"been", "be"},
      {"has", "have"},      {"had", "have"},    {"did", "do"},      {"done", "do"},
      {"ran", "run"},       {"running", "run"}, {"said", "say"},    {"made", "make"},
      {"took", "take"},     {"taken", "take"},  {"got", "get"},     {"gotten", "get"},
      {"saw", "see"},       {"seen", "see"},    {"came", "come"},   {"better", "good"},
      {"best", "good"},     {"worse", "bad"},   {"worst", "bad"},   {"children", "child"},
      {"men", "man"},       {"women", "woman"}, {"feet", "foot"},   {"teeth", "tooth"},
      {"mice", "mouse"},    {"geese", "goose"}, {"wolves", "wolf"}, {"leaves", "leaf"},
      {"knives", "knife"},  {"lives", "life"},
  };
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip(const std::string& s, std::size_t n) { return s.substr(0, s.size() - n); }

/// Undoubles a doubled final consonant ("stopp" -> "stop").
std::string undouble(std::string s) {
  if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] && !is_vowel(s.back()) &&
      text::is_ascii_alpha(s.back())) {
    s.pop_back();
  }
  return s;
}

bool sibilant_end(const std::string& s) {
  return ends_with(s, "s") || ends_with(s, "x") || ends_with(s, "z") || ends_with(s, "ch") ||
         ends_with(s, "sh");
}

std::string pluralize(const std::string& lemma) {
  if (lemma.size() >= 2 && lemma.back() == 'y' && !is_vowel(lemma[lemma.size() - 2])) {
    return strip(lemma, 1) + "ies";
  }
  if (sibilant_end(lemma)) return lemma + "es";
  return lemma + "s";
}

std::string gerund(const std::string& lemma) {
  if (ends_with(lemma, "e") && !ends_with(lemma, "ee")) return strip(lemma, 1) + "ing";
  return lemma + "ing";
}

std::string past(const std::string& lemma) {
  if (lemma.size() >= 2 && lemma.back() == 'y' && !is_vowel(lemma[lemma.size() - 2])) {
    return strip(lemma, 1) + "ied";
  }
  if (ends_with(lemma, "e")) return lemma + "d";
  return lemma + "ed";
}

std::string comparative(const std::string& lemma, bool superlative) {
  std::string stem = lemma;
  if (stem.size() >= 2 && stem.back() == 'y' && !is_vowel(stem[stem.size() - 2])) {
    stem = strip(stem, 1) + "i";
  } else if (ends_with(stem, "e")) {
    stem = strip(stem, 1);
  }
  return stem + (superlative ? "est" : "er");
}

}  // namespace

std::string EnglishMorphology::lemma(const std::string& surface, PosTag pos) const {
  const std::string lower = text::to_lower_ascii(surface);
  if (auto it = irregular_.find(lower); it != irregular_.end()) return it->second;
  if (lower.size() <= 3) return lower;
  switch (pos) {
    case PosTag::kNoun:
    case PosTag::kPropn:
      if (ends_with(lower, "ies")) return strip(lower, 3) + "y";
      if (ends_with(lower, "es") && sibilant_end(strip(lower, 2))) return strip(lower, 2);
      if (ends_with(lower, "s") && !ends_with(lower, "ss")) return strip(lower, 1);
      return lower;
    case PosTag::kVerb:
      if (ends_with(lower, "ies")) return strip(lower, 3) + "y";
      if (ends_with(lower, "ied")) return strip(lower, 3) + "y";
      if (ends_with(lower, "ing")) return undouble(strip(lower, 3));
      if (ends_with(lower, "ed")) {
        const std::string stem = undouble(strip(lower, 2));
        return stem;
      }
      if (ends_with(lower, "es") && sibilant_end(strip(lower, 2))) return strip(lower, 2);
      if (ends_with(lower, "s") && !ends_with(lower, "ss")) return strip(lower, 1);
      return lower;
    case PosTag::kAdj:
      if (ends_with(lower, "iest")) return strip(lower, 4) + "y";
      if (ends_with(lower, "ier")) return strip(lower, 3) + "y";
      if (ends_with(lower, "est")) return undouble(strip(lower, 3));
      if (ends_with(lower, "er")) return undouble(strip(lower, 2));
      return lower;
    default:
      return lower;
  }
}

std::string EnglishMorphology::match_form(const std::string& original_surface,
                                          const std::string& original_lemma,
                                          const std::string& replacement_lemma,
                                          PosTag pos) const {
  const std::string lower = text::to_lower_ascii(original_surface);
  std::string inflected = replacement_lemma;
  if (lower != original_lemma) {
    if (pos == PosTag::kAdj && lower == comparative(original_lemma, true)) {
      inflected = comparative(replacement_lemma, true);
    } else if (pos == PosTag::kAdj && lower == comparative(original_lemma, false)) {
      inflected = comparative(replacement_lemma, false);
    } else if (lower == pluralize(original_lemma)) {
      inflected = pluralize(replacement_lemma);
    } else if (ends_with(lower, "ing")) {
      inflected = gerund(replacement_lemma);
    } else if (ends_with(lower, "ed") || lower == past(original_lemma)) {
      inflected = past(replacement_lemma);
    } else if (ends_with(lower, "s")) {
      inflected = pluralize(replacement_lemma);
    }
  }
  return match_case(original_surface, inflected);
}

Eigen::VectorXd HashTokenEmbedding::embed(const std::string&, std::span<const Token> tokens,
                                          std::size_t index) const {
  const std::string key = text::to_lower_ascii(tokens[index].surface);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
  auto fnv = [](std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  };
  const std::string padded = "^" + key + "$";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = fnv(std::string_view(padded).substr(i, 3));
    v[static_cast<Eigen::Index>((h >> 1) % dim_)] += (h & 1) ? 1.0 : -1.0;
  }
  const double n = v.norm();
  return n > 0.0 ? Eigen::VectorXd(v / n) : v;
}

void FixedTokenEmbedding::set(const std::string& surface, Eigen::VectorXd v) {
  if (v.size() != dim_) throw std::invalid_argument("FixedTokenEmbedding: wrong dimension");
  vectors_[text::to_lower_ascii(surface)] = std::move(v);
}

Eigen::VectorXd FixedTokenEmbedding::embed(const std::string&, std::span<const Token> tokens,
                                           std::size_t index) const {
  auto it = vectors_.find(text::to_lower_ascii(tokens[index].surface));
  if (it != vectors_.end()) return it->second;
  return Eigen::VectorXd::Zero(dim_);
}

}  // namespace styll

#include "stylebreach/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "stylebreach/edit_distance.hpp"
#include "stylebreach/error.hpp"
#include "stylebreach/readability.hpp"
#include "stylebreach/segmenter.hpp"

namespace stylebreach {
namespace {

std::vector<std::string> token_texts(const Document& doc) {
  std::vector<std::string> out;
  out.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> lowercase_words(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (is_word_token(t.text)) out.push_back(is_special_token(t.text) ? t.text : normalize_word(t.text));
  }
  return out;
}

void require_tokens(const Document& doc) {
  if (doc.tokens.empty()) {
    throw InvalidArgument("cannot extract features from empty document '" + doc.id + "'");
  }
}

bool is_whitespace_byte(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_upper_ascii(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower_ascii(char c) { return c >= 'a' && c <= 'z'; }

bool is_double_quote(std::string_view t) {
  return t == "\"" || t == "\xE2\x80\x9C" || t == "\xE2\x80\x9D" || t == "\xE2\x80\x9E";
}

bool is_single_quote(std::string_view t) {
  return t == "'" || t == "\xE2\x80\x98" || t == "\xE2\x80\x99" || t == "\xE2\x80\x9A";
}

std::size_t count_apostrophes(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\'') {
      ++n;
    } else if (text.substr(i, 3) == "\xE2\x80\x99" || text.substr(i, 3) == "\xE2\x80\x98") {
      ++n;
      i += 2;
    }
  }
  return n;
}

// Each sentence fully or partly inside [begin, end), with its clipped token count.
std::vector<std::size_t> clipped_sentence_lengths(const Document& doc, std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (const auto& s : doc.sentences) {
    const std::size_t b = std::max(s.begin, begin);
    const std::size_t e = std::min(s.end, end);
    if (b < e) out.push_back(e - b);
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<FeatureGroup> default_stack_groups() {
  return {FeatureGroup::Tautology,    FeatureGroup::Contractions,  FeatureGroup::QuotationMarks,
          FeatureGroup::Readability,  FeatureGroup::FrequentWords, FeatureGroup::Lexical,
          FeatureGroup::VocabularyRichness};
}

std::string_view group_id(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::Tautology: return "tautology";
    case FeatureGroup::Contractions: return "contractions";
    case FeatureGroup::StatementBoundary: return "statement_boundary";
    case FeatureGroup::QuotationMarks: return "quotation_marks";
    case FeatureGroup::Readability: return "readability";
    case FeatureGroup::FrequentWords: return "frequent_words";
    case FeatureGroup::Lexical: return "lexical";
    case FeatureGroup::VocabularyRichness: return "vocabulary_richness";
    case FeatureGroup::NamedEntitySpelling: return "named_entity_spelling";
  }
  return "?";
}

std::string_view group_display_name(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::Tautology: return "Tautology";
    case FeatureGroup::Contractions: return "Grammar Contractions";
    case FeatureGroup::StatementBoundary: return "Beginning and Ending of Statements";
    case FeatureGroup::QuotationMarks: return "Quotation Marks";
    case FeatureGroup::Readability: return "Readability";
    case FeatureGroup::FrequentWords: return "Frequent Words";
    case FeatureGroup::Lexical: return "Lexical";
    case FeatureGroup::VocabularyRichness: return "Vocabulary Richness";
    case FeatureGroup::NamedEntitySpelling: return "Named Entity Spellings";
  }
  return "?";
}

FeatureGroup parse_feature_group(std::string_view name) {
  for (const auto g : kAllFeatureGroups) {
    if (name == group_id(g) || name == group_display_name(g)) return g;
  }
  throw InvalidArgument("unknown feature group '" + std::string(name) + "'");
}

const std::array<std::string_view, kLexicalDimension>& lexical_feature_names() {
  static const std::array<std::string_view, kLexicalDimension> names = {
      "space_ratio",          "digit_ratio",
      "comma_ratio",          "colon_ratio",
      "semicolon_ratio",      "apostrophe_ratio",
      "single_quote_ratio",   "double_quote_ratio",
      "open_paren_ratio",     "close_paren_ratio",
      "paragraphs_per_sentence", "punctuation_ratio",
      "pronoun_ratio",        "preposition_ratio",
      "coordinating_conjunction_ratio", "adjective_ratio",
      "adverb_ratio",         "determiner_ratio",
      "interjection_ratio",   "modal_ratio",
      "noun_ratio",           "personal_pronoun_ratio",
      "verb_ratio",           "short_word_ratio",
      "long_word_ratio",      "mean_word_length",
      "all_caps_ratio",       "capitalized_ratio",
      "question_ratio",       "period_ratio",
      "exclamation_ratio",    "short_sentence_ratio",
      "long_sentence_ratio",  "mean_sentence_length"};
  return names;
}

// ---------------------------------------------------------------------------
// Statement boundaries

// (1 + k) - x regrouped as k + (1 - x) so that x = 1 gives exactly 1.
double half_sigmoid_score(double x, double k) { return (k * x) / (k + (1.0 - x)); }

double relative_boundary_distance(std::size_t position, std::size_t length) {
  const double half = static_cast<double>(length) / 2.0;
  return std::abs(half - static_cast<double>(position + 1)) / half;
}

BoundaryScoreTable BoundaryScoreTable::build(std::span<const std::vector<std::string>> statements,
                                             double k) {
  if (!(k > 0.0)) throw InvalidArgument("half-sigmoid steepness must be positive");
  std::map<std::string, Entry> entries;
  std::map<std::string, double> sums;
  for (const auto& statement : statements) {
    const std::size_t length = statement.size();
    for (std::size_t p = 0; p < length; ++p) {
      Entry& e = entries[statement[p]];
      sums[statement[p]] += half_sigmoid_score(relative_boundary_distance(p, length), k);
      e.occurrences += 1;
      if (p == 0) e.begin_count += 1;
      if (p + 1 == length) e.end_count += 1;
    }
  }
  for (auto& [word, e] : entries) e.position_score = sums[word] / static_cast<double>(e.occurrences);
  return from_entries(std::move(entries), k);
}

BoundaryScoreTable BoundaryScoreTable::from_entries(std::map<std::string, Entry> entries, double k) {
  BoundaryScoreTable table;
  table.k_ = k;
  if (!entries.empty()) {
    const auto rescale = [&entries](auto count_of, auto assign) {
      std::size_t lo = SIZE_MAX;
      std::size_t hi = 0;
      for (const auto& [w, e] : entries) {
        lo = std::min(lo, count_of(e));
        hi = std::max(hi, count_of(e));
      }
      for (auto& [w, e] : entries) {
        const double value = hi > lo ? static_cast<double>(count_of(e) - lo) / static_cast<double>(hi - lo)
                                     : (hi > 0 ? 1.0 : 0.0);
        assign(e, value);
      }
    };
    rescale([](const Entry& e) { return e.begin_count; }, [](Entry& e, double v) { e.begin_rescaled = v; });
    rescale([](const Entry& e) { return e.end_count; }, [](Entry& e, double v) { e.end_rescaled = v; });
  }
  table.entries_ = std::move(entries);
  return table;
}

const BoundaryScoreTable::Entry* BoundaryScoreTable::find(std::string_view word) const {
  const auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

double BoundaryScoreTable::score(std::string_view word, BoundaryScoreMode mode) const {
  const Entry* e = find(word);
  if (e == nullptr) return 0.0;
  if (mode == BoundaryScoreMode::Position) return e->position_score;
  return std::max(e->begin_rescaled, e->end_rescaled);
}

namespace {

std::vector<std::pair<std::string, double>> top_words(
    const std::map<std::string, BoundaryScoreTable::Entry>& entries, std::size_t n,
    double BoundaryScoreTable::Entry::*field) {
  std::vector<std::pair<std::string, double>> all;
  all.reserve(entries.size());
  for (const auto& [w, e] : entries) all.emplace_back(w, e.*field);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (all.size() > n) all.resize(n);
  return all;
}

}  // namespace

std::vector<std::pair<std::string, double>> BoundaryScoreTable::top_begin_words(std::size_t n) const {
  return top_words(entries_, n, &Entry::begin_rescaled);
}

std::vector<std::pair<std::string, double>> BoundaryScoreTable::top_end_words(std::size_t n) const {
  return top_words(entries_, n, &Entry::end_rescaled);
}

std::vector<std::string> statement_words(std::span<const Token> tokens, const Lexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (!is_alpha_word(t.text)) continue;
    std::string w = normalize_word(t.text);
    if (!lexicon.stop_words.contains(w)) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::vector<std::string>> statements_from_borders(const Document& doc,
                                                              std::span<const std::size_t> borders,
                                                              const Lexicon& lexicon) {
  std::vector<std::vector<std::string>> out;
  std::size_t start = 0;
  const auto emit = [&](std::size_t end) {
    if (end <= start || end > doc.sentence_count()) return;
    const std::size_t tb = doc.sentences[start].begin;
    const std::size_t te = doc.sentences[end - 1].end;
    out.push_back(statement_words(std::span(doc.tokens).subspan(tb, te - tb), lexicon));
    start = end;
  };
  for (const auto b : borders) emit(b);
  emit(doc.sentence_count());
  return out;
}

double statement_boundary_value(std::span<const std::string> words, const BoundaryScoreTable& table,
                                double threshold, BoundaryScoreMode mode) {
  if (words.empty()) return 0.0;
  std::vector<bool> high(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) high[i] = table.score(words[i], mode) > threshold;
  std::size_t clusters = 0;
  for (std::size_t i = 0; i + 3 <= words.size(); ++i) {
    if (static_cast<int>(high[i]) + static_cast<int>(high[i + 1]) + static_cast<int>(high[i + 2]) >= 2) {
      ++clusters;
    }
  }
  return static_cast<double>(clusters) / static_cast<double>(words.size());
}

// ---------------------------------------------------------------------------
// Whole-document groups

std::vector<double> tautology_values(std::span<const std::string> words) {
  std::vector<double> out(kTautologyDimension, 0.0);
  for (std::size_t n = 1; n <= kTautologyDimension; ++n) {
    if (words.size() < n) break;
    std::unordered_map<std::string, std::size_t> grams;
    const std::size_t total = words.size() - n + 1;
    for (std::size_t i = 0; i < total; ++i) {
      std::string key = words[i];
      for (std::size_t j = 1; j < n; ++j) {
        key.push_back('\x1F');
        key += words[i + j];
      }
      grams[key] += 1;
    }
    out[n - 1] = static_cast<double>(total) / static_cast<double>(grams.size());
  }
  return out;
}

FeatureGroupVector tautology_features(const Document& doc) {
  require_tokens(doc);
  return {FeatureGroup::Tautology, tautology_values(lowercase_words(doc.tokens))};
}

FeatureGroupVector contraction_features(const Document& doc, const Lexicon& lexicon) {
  std::vector<std::string> lower;
  lower.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) lower.push_back(normalize_word(t.text));

  std::unordered_map<std::string, std::size_t> unigram;
  for (const auto& w : lower) unigram[w] += 1;

  std::vector<double> values;
  values.reserve(lexicon.contractions.size());
  for (const auto& pair : lexicon.contractions) {
    const auto it = unigram.find(pair.contracted);
    const std::size_t c = it == unigram.end() ? 0 : it->second;

    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= pair.expanded.size()) {
      const auto space = pair.expanded.find(' ', pos);
      const auto end = space == std::string::npos ? pair.expanded.size() : space;
      if (end > pos) parts.push_back(pair.expanded.substr(pos, end - pos));
      pos = end + 1;
    }
    std::size_t e = 0;
    if (!parts.empty() && lower.size() >= parts.size()) {
      for (std::size_t i = 0; i + parts.size() <= lower.size(); ++i) {
        if (std::equal(parts.begin(), parts.end(), lower.begin() + static_cast<std::ptrdiff_t>(i))) ++e;
      }
    }
    values.push_back(static_cast<double>(std::min(c, e)) / static_cast<double>(std::max<std::size_t>(1, c + e)));
  }
  return {FeatureGroup::Contractions, std::move(values)};
}

FeatureGroupVector quotation_feature(const Document& doc, const Lexicon& lexicon) {
  std::size_t doubles = 0;
  std::size_t singles = 0;
  const std::string_view text = doc.text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '"') {
      ++doubles;
    } else if (text[i] == '\'') {
      ++singles;
    } else if (static_cast<unsigned char>(text[i]) == 0xE2 && i + 2 < text.size() &&
               static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto c = static_cast<unsigned char>(text[i + 2]);
      if (c == 0x9C || c == 0x9D || c == 0x9E) ++doubles;
      if (c == 0x98 || c == 0x99 || c == 0x9A) ++singles;
      i += 2;
    }
  }
  std::size_t contraction_apostrophes = 0;
  for (const auto& t : doc.tokens) {
    if (lexicon.is_contraction(normalize_word(t.text))) contraction_apostrophes += count_apostrophes(t.text);
  }
  const double d = static_cast<double>(doubles);
  const double s = static_cast<double>(singles - std::min(singles, contraction_apostrophes));
  const double half = (d - s) / 2.0;
  return {FeatureGroup::QuotationMarks, {half * half}};
}

std::optional<double> word_frequency_class(std::string_view lowercase_word, const Lexicon& lexicon) {
  const auto it = lexicon.frequency.find(std::string(lowercase_word));
  if (it == lexicon.frequency.end() || !(it->second > 0.0)) return std::nullopt;
  return std::log2(lexicon.max_frequency() / it->second);
}

std::vector<double> vocabulary_richness_values(std::span<const std::string> tokens, const Lexicon& lexicon) {
  double sum = 0.0;
  std::size_t known = 0;
  std::size_t words = 0;
  for (const auto& t : tokens) {
    if (!is_alpha_word(t)) continue;
    ++words;
    if (const auto cls = word_frequency_class(normalize_word(t), lexicon)) {
      sum += *cls;
      ++known;
    }
  }
  if (words == 0) return {0.0, 0.0};
  return {known > 0 ? sum / static_cast<double>(known) : 0.0,
          static_cast<double>(words - known) / static_cast<double>(words)};
}

std::vector<double> frequent_word_values(std::span<const std::vector<std::string>> segments,
                                         const Lexicon& lexicon) {
  const auto& vocab = lexicon.frequent_words();
  if (segments.size() < 2) return std::vector<double>(vocab.size(), 0.0);
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i], i);

  std::vector<std::vector<double>> rates;
  rates.reserve(segments.size());
  for (const auto& segment : segments) {
    std::vector<double> r(vocab.size(), 0.0);
    for (const auto& token : segment) {
      const std::string w = normalize_word(token);
      if (const auto it = index.find(w); it != index.end()) r[it->second] += 1.0;
    }
    if (!segment.empty()) {
      for (auto& v : r) v /= static_cast<double>(segment.size());
    }
    rates.push_back(std::move(r));
  }
  return max_pairwise_diff(rates);
}

std::vector<double> readability_values(std::span<const std::string> tokens,
                                       std::span<const std::size_t> sentence_lengths,
                                       const Lexicon& lexicon) {
  std::vector<std::string> words;
  std::vector<std::size_t> words_per_sentence;
  std::size_t pos = 0;
  for (const auto len : sentence_lengths) {
    std::size_t count = 0;
    for (std::size_t i = pos; i < pos + len && i < tokens.size(); ++i) {
      if (is_word_token(tokens[i]) && !is_special_token(tokens[i])) {
        words.push_back(tokens[i]);
        ++count;
      }
    }
    words_per_sentence.push_back(count);
    pos += len;
  }
  const auto counts = count_text(words, words_per_sentence, lexicon.easy_words);
  const auto scores = readability_scores(counts);
  return {scores.begin(), scores.end()};
}

// ---------------------------------------------------------------------------
// Lexical group

std::vector<LexicalToken> lexical_stream(const Document& doc, const Lexicon& lexicon,
                                         const PreprocessLimits& limits) {
  std::vector<LexicalToken> out;
  out.reserve(doc.tokens.size());
  std::size_t previous_end = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (std::size_t t = doc.sentences[s].begin; t < doc.sentences[s].end; ++t) {
      const Token& token = doc.tokens[t];
      const std::string_view gap =
          std::string_view(doc.text).substr(previous_end, token.begin - std::min(previous_end, token.begin));
      std::size_t spaces = 0;
      for (const char c : gap) spaces += is_whitespace_byte(c) ? 1 : 0;
      const bool paragraph = has_blank_line(gap);
      previous_end = token.end;

      auto pieces = phase2_filter_token(token.text, lexicon, limits);
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        LexicalToken lt;
        lt.text = std::move(pieces[p]);
        lt.sentence = s;
        lt.sentence_initial = p == 0 && t == doc.sentences[s].begin;
        lt.gap_spaces = p == 0 ? spaces : 0;
        lt.paragraph_break = p == 0 && paragraph;
        out.push_back(std::move(lt));
      }
    }
  }
  return out;
}

std::vector<double> lexical_values(std::span<const LexicalToken> stream, std::span<const PosTag> tags) {
  if (tags.size() != stream.size()) throw InvalidArgument("lexical_values: tag count mismatch");
  std::vector<double> v(kLexicalDimension, 0.0);
  if (stream.empty()) return v;

  double chars = 0, spaces = 0, digits = 0, commas = 0, colons = 0, semicolons = 0;
  double apostrophes = 0, single_quotes = 0, double_quotes = 0, open_parens = 0, close_parens = 0;
  double paragraphs = 1, punctuation = 0;
  double words = 0, short_words = 0, long_words = 0, word_length_sum = 0, length_counted = 0;
  double all_caps = 0, capitalized = 0;
  std::array<double, 11> pos{};

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const LexicalToken& tok = stream[i];
    const std::string& text = tok.text;
    if (i > 0) {
      spaces += static_cast<double>(tok.gap_spaces);
      chars += static_cast<double>(tok.gap_spaces);
      if (tok.paragraph_break) paragraphs += 1;
    }
    const bool special = is_special_token(text);
    chars += special ? 1.0 : static_cast<double>(utf8_length(text));
    if (special) {
      words += 1;
    } else {
      for (const char c : text) {
        if (c >= '0' && c <= '9') digits += 1;
        if (c == ',') commas += 1;
        if (c == ':') colons += 1;
        if (c == ';') semicolons += 1;
        if (c == '(' || c == '[' || c == '{') open_parens += 1;
        if (c == ')' || c == ']' || c == '}') close_parens += 1;
      }
      if (is_word_token(text)) {
        words += 1;
        apostrophes += static_cast<double>(count_apostrophes(text));
        const auto len = static_cast<double>(utf8_length(text));
        word_length_sum += len;
        length_counted += 1;
        if (len >= 2 && len <= 3) short_words += 1;
        if (len > 6) long_words += 1;
        std::size_t upper = 0;
        std::size_t lower = 0;
        for (const char c : text) {
          upper += is_upper_ascii(c) ? 1 : 0;
          lower += is_lower_ascii(c) ? 1 : 0;
        }
        if (upper >= 2 && lower == 0) {
          all_caps += 1;
        } else if (is_upper_ascii(text[0])) {
          capitalized += 1;
        }
      } else {
        punctuation += static_cast<double>(utf8_length(text));
        if (is_single_quote(text)) single_quotes += 1;
        if (is_double_quote(text)) double_quotes += 1;
      }
    }
    if (is_word_token(text)) {
      switch (tags[i]) {
        case PosTag::PersonalPronoun: pos[0] += 1; pos[9] += 1; break;
        case PosTag::Pronoun: pos[0] += 1; break;
        case PosTag::Preposition: pos[1] += 1; break;
        case PosTag::CoordinatingConjunction: pos[2] += 1; break;
        case PosTag::Adjective: pos[3] += 1; break;
        case PosTag::Adverb: pos[4] += 1; break;
        case PosTag::Determiner: pos[5] += 1; break;
        case PosTag::Interjection: pos[6] += 1; break;
        case PosTag::Modal: pos[7] += 1; break;
        case PosTag::Noun: pos[8] += 1; break;
        case PosTag::Verb: pos[10] += 1; break;
        case PosTag::Number:
        case PosTag::Punctuation: break;
      }
    }
  }

  // Sentences as seen through the window: contiguous runs of equal sentence index.
  double sentences = 0, questions = 0, periods = 0, exclamations = 0, short_sentences = 0,
         long_sentences = 0;
  for (std::size_t i = 0; i < stream.size();) {
    std::size_t j = i;
    while (j < stream.size() && stream[j].sentence == stream[i].sentence) ++j;
    sentences += 1;
    const std::string& last = stream[j - 1].text;
    if (last == "?") questions += 1;
    if (last == "." || last == "\xE2\x80\xA6") periods += 1;
    if (last == "!") exclamations += 1;
    const std::size_t length = j - i;
    if (length < 6) short_sentences += 1;
    if (length > 25) long_sentences += 1;
    i = j;
  }

  const auto per = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  std::size_t k = 0;
  for (const double c : {spaces, digits, commas, colons, semicolons, apostrophes, single_quotes,
                         double_quotes, open_parens, close_parens}) {
    v[k++] = per(c, chars);
  }
  v[k++] = per(paragraphs, sentences);
  v[k++] = per(punctuation, chars);
  for (const double p : pos) v[k++] = per(p, words);
  v[k++] = per(short_words, words);
  v[k++] = per(long_words, words);
  v[k++] = per(word_length_sum, length_counted);
  v[k++] = per(all_caps, words);
  v[k++] = per(capitalized, words);
  v[k++] = per(questions, sentences);
  v[k++] = per(periods, sentences);
  v[k++] = per(exclamations, sentences);
  v[k++] = per(short_sentences, sentences);
  v[k++] = per(long_sentences, sentences);
  v[k++] = per(words, sentences);
  return v;
}

// ---------------------------------------------------------------------------
// Named entities

NamedEntityCounts named_entity_candidates(const Document& doc, const Lexicon& lexicon, std::size_t min_length) {
  NamedEntityCounts out;
  std::vector<bool> opens_sentence(doc.tokens.size(), false);
  for (const auto& s : doc.sentences) {
    // Leading quotes or brackets do not move the sentence start.
    for (std::size_t t = s.begin; t < s.end; ++t) {
      if (is_word_token(doc.tokens[t].text)) {
        opens_sentence[t] = true;
        break;
      }
    }
  }
  const auto candidate = [&](std::size_t t) {
    const std::string& text = doc.tokens[t].text;
    if (opens_sentence[t] || !is_word_token(text) || is_special_token(text) || is_number_token(text)) return false;
    if (!is_upper_ascii(text[0])) return false;
    const std::string lower = normalize_word(text);
    return lower != "i" && !lexicon.is_contraction(lower);
  };
  std::size_t t = 0;
  while (t < doc.tokens.size()) {
    if (!candidate(t)) {
      ++t;
      continue;
    }
    std::string entity = doc.tokens[t].text;
    std::size_t u = t + 1;
    while (u < doc.tokens.size() && candidate(u) && doc.tokens[u].begin > doc.tokens[u - 1].end) {
      entity.push_back(' ');
      entity += doc.tokens[u].text;
      ++u;
    }
    if (utf8_length(entity) >= min_length) out.counts[entity] += 1;
    t = u;
  }
  return out;
}

std::vector<double> named_entity_spelling_values(const NamedEntityCounts& entities) {
  std::vector<std::string> spellings;
  std::vector<std::size_t> counts;
  for (const auto& [s, c] : entities.counts) {
    spellings.push_back(s);
    counts.push_back(c);
  }
  UnionFind groups(spellings.size());
  for (std::size_t i = 0; i < spellings.size(); ++i) {
    for (std::size_t j = i + 1; j < spellings.size(); ++j) {
      const std::size_t a = spellings[i].size();
      const std::size_t b = spellings[j].size();
      if ((a > b ? a - b : b - a) > 1) continue;
      if (damerau_levenshtein(spellings[i], spellings[j]) <= 1) groups.unite(i, j);
    }
  }
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_root;  // root -> (members, min count)
  for (std::size_t i = 0; i < spellings.size(); ++i) {
    auto [it, inserted] = by_root.try_emplace(groups.find(i), 0, SIZE_MAX);
    it->second.first += 1;
    it->second.second = std::min(it->second.second, counts[i]);
  }
  double variant_groups = 0;
  double min_sum = 0;
  for (const auto& [root, info] : by_root) {
    if (info.first < 2) continue;
    variant_groups += 1;
    min_sum += static_cast<double>(info.second);
  }
  return {variant_groups, min_sum};
}

// ---------------------------------------------------------------------------
// Extractor

FeatureExtractor::FeatureExtractor(const Lexicon& lexicon, FeatureConfig config,
                                   std::shared_ptr<const BoundaryScoreTable> boundary_table)
    : lexicon_(&lexicon), config_(config), boundary_table_(std::move(boundary_table)) {
  if (config_.segments < 2) throw InvalidArgument("feature extraction needs at least 2 segments");
}

std::size_t FeatureExtractor::dimension(FeatureGroup group) const {
  switch (group) {
    case FeatureGroup::Tautology: return kTautologyDimension;
    case FeatureGroup::Contractions: return lexicon_->contractions.size();
    case FeatureGroup::StatementBoundary: return 1;
    case FeatureGroup::QuotationMarks: return 1;
    case FeatureGroup::Readability: return kReadabilityDimension;
    case FeatureGroup::FrequentWords: return lexicon_->frequent_words().size();
    case FeatureGroup::Lexical: return kLexicalDimension;
    case FeatureGroup::VocabularyRichness: return 2;
    case FeatureGroup::NamedEntitySpelling: return 2;
  }
  return 0;
}

std::vector<std::string> FeatureExtractor::feature_names(FeatureGroup group) const {
  std::vector<std::string> names;
  switch (group) {
    case FeatureGroup::Tautology:
      for (int n = 1; n <= 5; ++n) names.push_back(std::to_string(n) + "gram_repetition");
      break;
    case FeatureGroup::Contractions:
      for (const auto& p : lexicon_->contractions) names.push_back(p.contracted);
      break;
    case FeatureGroup::StatementBoundary: names.emplace_back("boundary_clusters"); break;
    case FeatureGroup::QuotationMarks: names.emplace_back("quote_variance"); break;
    case FeatureGroup::Readability:
      for (const auto n : readability_names()) names.emplace_back(n);
      break;
    case FeatureGroup::FrequentWords: names = lexicon_->frequent_words(); break;
    case FeatureGroup::Lexical:
      for (const auto n : lexical_feature_names()) names.emplace_back(n);
      break;
    case FeatureGroup::VocabularyRichness:
      names = {"mean_frequency_class", "unknown_word_ratio"};
      break;
    case FeatureGroup::NamedEntitySpelling:
      names = {"variant_groups", "min_spelling_count_sum"};
      break;
  }
  return names;
}

FeatureGroupVector FeatureExtractor::extract(FeatureGroup group, const Document& doc) const {
  require_tokens(doc);
  const Lexicon& lex = *lexicon_;
  const std::size_t n = doc.token_count();

  const auto windows = [&](std::size_t count) {
    return sliding_windows(doc.id, count, default_window_size(count, config_.segments), config_.window_overlap);
  };

  switch (group) {
    case FeatureGroup::Tautology: return tautology_features(doc);
    case FeatureGroup::Contractions: return contraction_features(doc, lex);
    case FeatureGroup::QuotationMarks: return quotation_feature(doc, lex);
    case FeatureGroup::StatementBoundary: {
      if (!boundary_table_) {
        throw InvalidArgument("statement boundary features need a boundary score table");
      }
      const auto words = statement_words(doc.tokens, lex);
      return {group, {statement_boundary_value(words, *boundary_table_, config_.boundary_threshold,
                                               config_.boundary_mode)}};
    }
    case FeatureGroup::NamedEntitySpelling:
      return {group, named_entity_spelling_values(named_entity_candidates(doc, lex, config_.entity_min_length))};
    case FeatureGroup::FrequentWords: {
      const auto texts = token_texts(doc);
      std::vector<std::vector<std::string>> segments;
      for (const auto& seg : split_fixed(doc.id, n, std::min(config_.segments, n))) {
        segments.emplace_back(texts.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                              texts.begin() + static_cast<std::ptrdiff_t>(seg.end));
      }
      return {group, frequent_word_values(segments, lex)};
    }
    case FeatureGroup::Readability: {
      const auto texts = token_texts(doc);
      std::vector<std::vector<double>> per_window;
      for (const auto& w : windows(n)) {
        const auto lengths = clipped_sentence_lengths(doc, w.begin, w.end);
        per_window.push_back(
            readability_values(std::span(texts).subspan(w.begin, w.size()), lengths, lex));
      }
      return {group, max_pairwise_diff(per_window)};
    }
    case FeatureGroup::VocabularyRichness: {
      const auto texts = token_texts(doc);
      std::vector<std::vector<double>> per_window;
      for (const auto& w : windows(n)) {
        per_window.push_back(vocabulary_richness_values(std::span(texts).subspan(w.begin, w.size()), lex));
      }
      return {group, max_pairwise_diff(per_window)};
    }
    case FeatureGroup::Lexical: {
      const auto stream = lexical_stream(doc, lex, config_.limits);
      std::vector<std::string> texts;
      texts.reserve(stream.size());
      std::unique_ptr<bool[]> initial(new bool[stream.size()]);
      for (std::size_t i = 0; i < stream.size(); ++i) {
        texts.push_back(stream[i].text);
        initial[i] = stream[i].sentence_initial;
      }
      const auto tags = tagger_.tag(texts, std::span<const bool>(initial.get(), stream.size()));
      std::vector<std::vector<double>> per_window;
      for (const auto& w : windows(stream.size())) {
        per_window.push_back(lexical_values(std::span(stream).subspan(w.begin, w.size()),
                                            std::span(tags).subspan(w.begin, w.size())));
      }
      return {group, max_pairwise_diff(per_window)};
    }
  }
  throw InvalidArgument("unknown feature group");
}

std::vector<FeatureGroupVector> FeatureExtractor::extract(std::span<const FeatureGroup> groups,
                                                          const Document& doc) const {
  std::vector<FeatureGroupVector> out;
  out.reserve(groups.size());
  for (const auto g : groups) out.push_back(extract(g, doc));
  return out;
}

const Eigen::MatrixXd& FeatureTable::matrix(FeatureGroup group) const {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] == group) return matrices[i];
  }
  throw InvalidArgument("feature table has no group '" + std::string(group_id(group)) + "'");
}

FeatureTable extract_feature_table(const FeatureExtractor& extractor, std::span<const Document> docs,
                                   std::span<const FeatureGroup> groups, Execution exec) {
  FeatureTable table;
  table.groups.assign(groups.begin(), groups.end());
  for (const auto g : groups) {
    table.matrices.emplace_back(static_cast<Eigen::Index>(docs.size()),
                                static_cast<Eigen::Index>(extractor.dimension(g)));
  }
  for_each_index(docs.size(), exec, [&](std::size_t row) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto vec = extractor.extract(groups[gi], docs[row]);
      for (std::size_t d = 0; d < vec.values.size(); ++d) {
        const double value = vec.values[d];
        if (!std::isfinite(value)) {
          throw Error("non-finite " + std::string(group_id(groups[gi])) + " feature in document '" +
                      docs[row].id + "'");
        }
        table.matrices[gi](static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d)) = value;
      }
    }
  });
  return table;
}

void write_feature_tsv(std::ostream& out, const FeatureExtractor& extractor, const FeatureTable& table,
                       std::span<const std::string> ids) {
  out << "id";
  for (const auto g : table.groups) {
    for (const auto& name : extractor.feature_names(g)) out << '\t' << group_id(g) << '.' << name;
  }
  out << '\n';
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t row = 0; row < ids.size(); ++row) {
    out << ids[row];
    for (const auto& m : table.matrices) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << '\t' << m(static_cast<Eigen::Index>(row), c);
    }
    out << '\n';
  }
  out << std::setprecision(static_cast<int>(precision));
}

}  // namespace stylebreach

#pragma once

// Text normalization and tokenization.
//
// Phase 1 runs on raw text before anything else and replaces URLs and long
// digit runs with placeholder tokens. Phase 2 runs on token streams and is
// only applied to the lexical feature group: it collapses file paths,
// character floods, over-long words and long hyphenated compounds.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace stylebreach {

inline constexpr std::string_view kUrlToken = "<URL>";
inline constexpr std::string_view kNumberToken = "<NUM>";
inline constexpr std::string_view kPathToken = "<PATH>";
inline constexpr std::string_view kLongToken = "<LONG>";

struct PreprocessLimits {
  std::size_t max_digit_run = 6;     // longer runs become <NUM>
  std::size_t repeat_run = 5;        // a character repeated this often -> <LONG>
  std::size_t max_word_length = 24;  // longer tokens -> <LONG>
};

/// A token and its byte span [begin, end) in the text it was cut from.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

/// Half-open token index range.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenRange&) const = default;
};

struct Tokenized {
  std::vector<Token> tokens;
  std::vector<TokenRange> sentences;
};

/// One phase-1 substitution: normalized span [norm_begin, norm_end) replaced
/// source span [source_begin, source_end).
struct Replacement {
  std::size_t norm_begin = 0;
  std::size_t norm_end = 0;
  std::size_t source_begin = 0;
  std::size_t source_end = 0;

  bool operator==(const Replacement&) const = default;
};

struct Phase1Result {
  std::string text;
  std::vector<Replacement> replacements;  // ordered by position
};

struct ContractionPair {
  std::string contracted;  // lowercase, ASCII apostrophe
  std::string expanded;    // lowercase, space separated

  bool operator==(const ContractionPair&) const = default;
};

inline constexpr std::size_t kContractionPairCount = 29;

/// Word lists and frequency data shared by every feature extractor.
///
/// Loaded from a directory containing:
///   common_words.txt   stop_words.txt   function_words.txt   easy_words.txt
///   contractions.tsv   (contracted<TAB>expanded)
///   frequency.tsv      (word<TAB>count)
class Lexicon {
 public:
  std::unordered_set<std::string> common_words;
  std::unordered_set<std::string> stop_words;
  std::unordered_set<std::string> function_words;
  std::unordered_set<std::string> easy_words;
  std::vector<ContractionPair> contractions;
  std::unordered_map<std::string, double> frequency;

  static Lexicon load(const std::filesystem::path& directory);

  /// $STYLEBREACH_LEXICON_DIR if set, else the directory compiled in.
  static std::filesystem::path default_directory();

  /// Loads default_directory() once per process and returns it.
  static const Lexicon& bundled();

  /// Recomputes derived state and checks invariants; throws ParseError.
  void finalize();

  const std::string& max_frequency_word() const { return max_frequency_word_; }
  double max_frequency() const { return max_frequency_; }

  /// Sorted union of stop words and function words.
  const std::vector<std::string>& frequent_words() const { return frequent_words_; }

  /// Lowercase contracted forms, for apostrophe bookkeeping.
  bool is_contraction(std::string_view lowercase_token) const;

  /// Stable content hash (hex) used to tie models to their lexicon.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string max_frequency_word_;
  double max_frequency_ = 0.0;
  std::vector<std::string> frequent_words_;
  std::unordered_set<std::string> contracted_forms_;
  std::string fingerprint_;
};

std::string phase1_normalize(std::string_view text, const PreprocessLimits& limits = {});
Phase1Result phase1_normalize_mapped(std::string_view text, const PreprocessLimits& limits = {});

/// Phase-2 filtering of a single token; hyphen splitting may yield several.
std::vector<std::string> phase2_filter_token(std::string_view token, const Lexicon& lexicon,
                                             const PreprocessLimits& limits = {});
std::vector<std::string> phase2_filter(std::span<const std::string> tokens, const Lexicon& lexicon,
                                       const PreprocessLimits& limits = {});

/// Tokenizer rules:
///  - whitespace separates tokens and is never part of one;
///  - <URL>, <NUM>, <PATH>, <LONG> are atomic;
///  - a whitespace-delimited chunk with two or more '/' or '\' separators is
///    kept whole as a path (trailing punctuation split off);
///  - a word is a run of letters/digits, joined across a single apostrophe or
///    hyphen between alphanumerics ("don't", "state-of-the-art" are one
///    token), and across '.' or ',' between digits ("3.14");
///  - every other character is a one-character punctuation token.
/// Sentences are then split by split_sentences().
Tokenized tokenize(std::string_view text);

/// Rule-based splitter. A sentence ends at '.', '!', '?' or an ellipsis
/// (plus any trailing closing quotes/brackets) when followed by whitespace
/// and an uppercase letter or an opening quote, unless the period ends a
/// known abbreviation or a single-letter initial. A blank line always ends a
/// sentence, as does the end of the text.
std::vector<TokenRange> split_sentences(std::string_view text, std::span<const Token> tokens);

// Token classification helpers.
bool is_special_token(std::string_view token);
bool is_word_token(std::string_view token);  // starts with a letter or digit, or special
bool is_alpha_word(std::string_view token);  // letters and apostrophes only
bool is_number_token(std::string_view token);
bool is_terminal_punct(std::string_view token);
std::string to_lower(std::string_view text);
/// Lowercases and maps typographic apostrophes to '\''.
std::string normalize_word(std::string_view token);
/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view text);
bool has_blank_line(std::string_view text);

}  // namespace stylebreach

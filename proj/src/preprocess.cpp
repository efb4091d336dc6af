#include "stylebreach/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "stylebreach/error.hpp"

#ifndef STYLEBREACH_DEFAULT_LEXICON_DIR
#define STYLEBREACH_DEFAULT_LEXICON_DIR "data/lexicon"
#endif

namespace stylebreach {
namespace {

constexpr std::array<std::string_view, 4> kSpecialTokens = {kUrlToken, kNumberToken, kPathToken,
                                                            kLongToken};

struct CodePoint {
  char32_t value = 0;
  std::size_t length = 1;
};

CodePoint decode(std::string_view text, std::size_t i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  if (lead < 0x80) return {lead, 1};
  std::size_t length = 1;
  char32_t value = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    value = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    value = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    value = lead & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + length > text.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < length; ++k) {
    const auto cont = static_cast<unsigned char>(text[i + k]);
    if ((cont & 0xC0) != 0x80) return {0xFFFD, 1};
    value = (value << 6) | (cont & 0x3F);
  }
  return {value, length};
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0x00A0;
}

bool is_unicode_punct(char32_t cp) {
  switch (cp) {
    case 0x2018: case 0x2019: case 0x201C: case 0x201D: case 0x2013: case 0x2014:
    case 0x2026: case 0x00AB: case 0x00BB: case 0x00B7: case 0x2022:
      return true;
    default:
      return false;
  }
}

bool is_alnum_cp(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  return !is_space(cp) && !is_unicode_punct(cp) && cp != 0xFFFD;
}

bool is_apostrophe_cp(char32_t cp) { return cp == '\'' || cp == 0x2019; }

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(text[pos + k])) != prefix[k]) return false;
  }
  return true;
}

bool is_trailing_punct_ascii(char c) {
  static constexpr std::string_view kTrailing = ".,;:!?)]}\"'";
  return kTrailing.find(c) != std::string_view::npos;
}

// Strips ASCII closers and the UTF-8 closing quotes (’ ”) from the end.
std::size_t trim_trailing_punct(std::string_view text, std::size_t begin, std::size_t end) {
  while (end > begin) {
    if (is_trailing_punct_ascii(text[end - 1])) {
      --end;
      continue;
    }
    if (end - begin >= 3 && static_cast<unsigned char>(text[end - 3]) == 0xE2 &&
        static_cast<unsigned char>(text[end - 2]) == 0x80 &&
        (static_cast<unsigned char>(text[end - 1]) == 0x99 ||
         static_cast<unsigned char>(text[end - 1]) == 0x9D)) {
      end -= 3;
      continue;
    }
    break;
  }
  return end;
}

// URLs end at whitespace or an angle bracket (never valid inside a URL).
std::size_t chunk_end(std::string_view text, std::size_t pos) {
  while (pos < text.size()) {
    const CodePoint cp = decode(text, pos);
    if (is_space(cp.value) || cp.value == '<' || cp.value == '>') break;
    pos += cp.length;
  }
  return pos;
}

// Length of the URL starting at pos, or 0.
std::size_t url_length(std::string_view text, std::size_t pos) {
  if (pos > 0 && (is_alnum_cp(static_cast<unsigned char>(text[pos - 1])) || text[pos - 1] == '>')) {
    return 0;
  }
  static constexpr std::array<std::string_view, 4> kPrefixes = {"http://", "https://", "ftp://",
                                                                "www."};
  for (const auto prefix : kPrefixes) {
    if (!starts_with_ci(text, pos, prefix)) continue;
    const std::size_t end = trim_trailing_punct(text, pos, chunk_end(text, pos));
    if (end > pos + prefix.size()) return end - pos;
  }
  return 0;
}

std::uint64_t fnv1a(std::uint64_t hash, std::string_view bytes) {
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::ifstream open_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open lexicon file " + path.string());
  return in;
}

std::string trim(std::string_view line) {
  std::size_t b = 0;
  std::size_t e = line.size();
  while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
  return std::string(line.substr(b, e - b));
}

std::unordered_set<std::string> read_word_list(const std::filesystem::path& path) {
  auto in = open_lexicon_file(path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto word = trim(line);
    if (!word.empty() && word[0] != '#') words.insert(normalize_word(word));
  }
  return words;
}

std::vector<std::string> sorted(const std::unordered_set<std::string>& words) {
  std::vector<std::string> out(words.begin(), words.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_abbreviation(std::string_view lower) {
  static const std::unordered_set<std::string_view> kAbbreviations = {
      "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "mt", "fig", "inc",
      "ltd", "co", "no", "gen", "col", "lt", "sgt", "capt", "rev", "hon", "approx", "dept"};
  return kAbbreviations.contains(lower);
}

bool is_closer(std::string_view token) {
  return token == "\"" || token == "'" || token == ")" || token == "]" || token == "\xE2\x80\x9D" ||
         token == "\xE2\x80\x99";
}

bool is_opener(std::string_view token) {
  return token == "\"" || token == "'" || token == "(" || token == "[" ||
         token == "\xE2\x80\x9C" || token == "\xE2\x80\x98";
}

}  // namespace

bool is_special_token(std::string_view token) {
  return std::find(kSpecialTokens.begin(), kSpecialTokens.end(), token) != kSpecialTokens.end();
}

bool is_word_token(std::string_view token) {
  if (token.empty()) return false;
  if (is_special_token(token)) return true;
  return is_alnum_cp(decode(token, 0).value);
}

bool is_alpha_word(std::string_view token) {
  if (token.empty()) return false;
  bool any_letter = false;
  for (std::size_t i = 0; i < token.size();) {
    const CodePoint cp = decode(token, i);
    if (is_apostrophe_cp(cp.value) || cp.value == '-') {
      // joiners allowed
    } else if (cp.value < 0x80) {
      if (!std::isalpha(static_cast<int>(cp.value))) return false;
      any_letter = true;
    } else if (!is_alnum_cp(cp.value)) {
      return false;
    } else {
      any_letter = true;
    }
    i += cp.length;
  }
  return any_letter;
}

bool is_number_token(std::string_view token) {
  if (token.empty() || !is_ascii_digit(token[0])) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return is_ascii_digit(c) || c == '.' || c == ','; });
}

bool is_terminal_punct(std::string_view token) {
  return token == "." || token == "!" || token == "?" || token == "\xE2\x80\xA6";
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_word(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size();) {
    const CodePoint cp = decode(token, i);
    if (cp.value == 0x2019 || cp.value == 0x2018) {
      out.push_back('\'');
    } else if (cp.length == 1) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(token[i]))));
    } else {
      out.append(token.substr(i, cp.length));
    }
    i += cp.length;
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (const char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

bool has_blank_line(std::string_view text) {
  std::size_t newlines = 0;
  for (const char c : text) {
    if (c == '\n') {
      if (++newlines >= 2) return true;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      newlines = 0;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::load(const std::filesystem::path& directory) {
  Lexicon lex;
  lex.common_words = read_word_list(directory / "common_words.txt");
  lex.stop_words = read_word_list(directory / "stop_words.txt");
  lex.function_words = read_word_list(directory / "function_words.txt");
  lex.easy_words = read_word_list(directory / "easy_words.txt");

  {
    auto in = open_lexicon_file(directory / "contractions.tsv");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw ParseError("contractions.tsv:" + std::to_string(line_no) + ": expected TAB");
      }
      lex.contractions.push_back(
          {normalize_word(trim(line.substr(0, tab))), normalize_word(trim(line.substr(tab + 1)))});
    }
  }
  {
    auto in = open_lexicon_file(directory / "frequency.tsv");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto tab = line.find('\t');
      char* parse_end = nullptr;
      const double count =
          tab == std::string::npos ? 0.0 : std::strtod(line.c_str() + tab + 1, &parse_end);
      if (tab == std::string::npos || parse_end == line.c_str() + tab + 1) {
        throw ParseError("frequency.tsv:" + std::to_string(line_no) + ": expected word<TAB>count");
      }
      lex.frequency.emplace(normalize_word(trim(line.substr(0, tab))), count);
    }
  }
  lex.finalize();
  return lex;
}

std::filesystem::path Lexicon::default_directory() {
  if (const char* env = std::getenv("STYLEBREACH_LEXICON_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return STYLEBREACH_DEFAULT_LEXICON_DIR;
}

const Lexicon& Lexicon::bundled() {
  static const Lexicon lexicon = load(default_directory());
  return lexicon;
}

void Lexicon::finalize() {
  if (contractions.size() != kContractionPairCount) {
    throw ParseError("lexicon must hold exactly " + std::to_string(kContractionPairCount) +
                     " contraction pairs, found " + std::to_string(contractions.size()));
  }
  if (frequency.empty()) throw ParseError("lexicon frequency table is empty");

  max_frequency_ = 0.0;
  max_frequency_word_.clear();
  for (const auto& word : sorted([&] {
         std::unordered_set<std::string> keys;
         for (const auto& [w, f] : frequency) keys.insert(w);
         return keys;
       }())) {
    const double f = frequency.at(word);
    if (!(f > 0.0)) throw ParseError("non-positive frequency for '" + word + "'");
    if (f > max_frequency_) {
      max_frequency_ = f;
      max_frequency_word_ = word;
    }
  }

  std::unordered_set<std::string> merged = stop_words;
  merged.insert(function_words.begin(), function_words.end());
  frequent_words_ = sorted(merged);

  contracted_forms_.clear();
  for (const auto& pair : contractions) contracted_forms_.insert(pair.contracted);

  std::uint64_t hash = 0xCBF29CE484222325ULL;
  const auto hash_list = [&hash](std::string_view tag, const std::vector<std::string>& words) {
    hash = fnv1a(hash, tag);
    for (const auto& w : words) {
      hash = fnv1a(hash, w);
      hash = fnv1a(hash, "\n");
    }
  };
  hash_list("common", sorted(common_words));
  hash_list("stop", sorted(stop_words));
  hash_list("function", sorted(function_words));
  hash_list("easy", sorted(easy_words));
  for (const auto& pair : contractions) {
    hash = fnv1a(hash, pair.contracted + "\t" + pair.expanded + "\n");
  }
  std::vector<std::string> freq_lines;
  freq_lines.reserve(frequency.size());
  for (const auto& [w, f] : frequency) {
    std::ostringstream line;
    line << w << '\t' << std::setprecision(17) << f;
    freq_lines.push_back(line.str());
  }
  std::sort(freq_lines.begin(), freq_lines.end());
  hash_list("frequency", freq_lines);

  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << hash;
  fingerprint_ = hex.str();
}

bool Lexicon::is_contraction(std::string_view lowercase_token) const {
  return contracted_forms_.contains(std::string(lowercase_token));
}

// ---------------------------------------------------------------------------
// Phase 1

Phase1Result phase1_normalize_mapped(std::string_view text, const PreprocessLimits& limits) {
  Phase1Result result;
  result.text.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (const std::size_t len = url_length(text, i); len > 0) {
      const std::size_t norm_begin = result.text.size();
      result.text.append(kUrlToken);
      result.replacements.push_back({norm_begin, result.text.size(), i, i + len});
      i += len;
      continue;
    }
    if (is_ascii_digit(text[i])) {
      std::size_t j = i;
      while (j < text.size() && is_ascii_digit(text[j])) ++j;
      if (j - i > limits.max_digit_run) {
        const std::size_t norm_begin = result.text.size();
        result.text.append(kNumberToken);
        result.replacements.push_back({norm_begin, result.text.size(), i, j});
      } else {
        result.text.append(text.substr(i, j - i));
      }
      i = j;
      continue;
    }
    result.text.push_back(text[i]);
    ++i;
  }
  return result;
}

std::string phase1_normalize(std::string_view text, const PreprocessLimits& limits) {
  return phase1_normalize_mapped(text, limits).text;
}

// ---------------------------------------------------------------------------
// Phase 2

namespace {

bool has_repeat_run(std::string_view token, std::size_t run) {
  std::size_t current = 0;
  char32_t previous = 0;
  for (std::size_t i = 0; i < token.size();) {
    const CodePoint cp = decode(token, i);
    current = (cp.value == previous) ? current + 1 : 1;
    previous = cp.value;
    if (current >= run) return true;
    i += cp.length;
  }
  return false;
}

std::string filter_plain(std::string_view token, const PreprocessLimits& limits) {
  if (is_special_token(token)) return std::string(token);
  if (has_repeat_run(token, limits.repeat_run)) return std::string(kLongToken);
  if (utf8_length(token) > limits.max_word_length) return std::string(kLongToken);
  return std::string(token);
}

}  // namespace

std::vector<std::string> phase2_filter_token(std::string_view token, const Lexicon& lexicon,
                                             const PreprocessLimits& limits) {
  if (is_special_token(token)) return {std::string(token)};

  const auto separators = std::count_if(token.begin(), token.end(),
                                        [](char c) { return c == '/' || c == '\\'; });
  if (separators >= 2) return {std::string(kPathToken)};

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= token.size(); ++i) {
    if (i == token.size() || token[i] == '-') {
      parts.push_back(token.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() >= 3) {
    const auto known = std::count_if(parts.begin(), parts.end(), [&](std::string_view part) {
      return !part.empty() && lexicon.common_words.contains(normalize_word(part));
    });
    if (2 * static_cast<std::size_t>(known) <= parts.size()) return {std::string(kLongToken)};
    std::vector<std::string> out;
    for (const auto part : parts) {
      if (!part.empty()) out.push_back(filter_plain(part, limits));
    }
    return out;
  }
  return {filter_plain(token, limits)};
}

std::vector<std::string> phase2_filter(std::span<const std::string> tokens, const Lexicon& lexicon,
                                       const PreprocessLimits& limits) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    auto filtered = phase2_filter_token(token, lexicon, limits);
    out.insert(out.end(), std::make_move_iterator(filtered.begin()),
               std::make_move_iterator(filtered.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

Tokenized tokenize(std::string_view text) {
  Tokenized out;
  auto& tokens = out.tokens;
  const auto emit = [&](std::size_t b, std::size_t e) {
    tokens.push_back({std::string(text.substr(b, e - b)), b, e});
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const CodePoint cp = decode(text, i);
    if (is_space(cp.value)) {
      i += cp.length;
      continue;
    }

    bool matched_special = false;
    for (const auto special : kSpecialTokens) {
      if (text.substr(i, special.size()) == special) {
        emit(i, i + special.size());
        i += special.size();
        matched_special = true;
        break;
      }
    }
    if (matched_special) continue;

    // Path-shaped chunk.
    if (is_alnum_cp(cp.value) || cp.value == '/' || cp.value == '\\' || cp.value == '.' ||
        cp.value == '~') {
      const std::size_t end = chunk_end(text, i);
      const std::string_view chunk = text.substr(i, end - i);
      const auto separators = std::count_if(chunk.begin(), chunk.end(),
                                            [](char c) { return c == '/' || c == '\\'; });
      const bool has_alnum = std::any_of(chunk.begin(), chunk.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
      });
      if (separators >= 2 && has_alnum && chunk.find('<') == std::string_view::npos) {
        const std::size_t core_end = trim_trailing_punct(text, i, end);
        if (core_end > i) {
          emit(i, core_end);
          i = core_end;
          continue;
        }
      }
    }

    if (!is_alnum_cp(cp.value)) {
      emit(i, i + cp.length);
      i += cp.length;
      continue;
    }

    std::size_t j = i;
    const auto consume_alnum = [&]() {
      while (j < text.size()) {
        const CodePoint next = decode(text, j);
        if (!is_alnum_cp(next.value)) break;
        j += next.length;
      }
    };
    consume_alnum();
    while (j < text.size()) {
      const CodePoint joiner = decode(text, j);
      const std::size_t after = j + joiner.length;
      if (after >= text.size()) break;
      const CodePoint next = decode(text, after);
      if ((is_apostrophe_cp(joiner.value) || joiner.value == '-') && is_alnum_cp(next.value)) {
        j = after;
        consume_alnum();
        continue;
      }
      if ((joiner.value == '.' || joiner.value == ',') && is_ascii_digit(text[j - 1]) &&
          is_ascii_digit(text[after])) {
        j = after;
        consume_alnum();
        continue;
      }
      break;
    }
    emit(i, j);
    i = j;
  }

  out.sentences = split_sentences(text, tokens);
  return out;
}

std::vector<TokenRange> split_sentences(std::string_view text, std::span<const Token> tokens) {
  std::vector<TokenRange> sentences;
  const std::size_t n = tokens.size();
  if (n == 0) return sentences;

  std::size_t start = 0;
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t last = t;
    bool boundary = false;

    if (is_terminal_punct(tokens[t].text)) {
      std::size_t j = t;
      while (j + 1 < n && tokens[j + 1].begin == tokens[j].end &&
             (is_terminal_punct(tokens[j + 1].text) || is_closer(tokens[j + 1].text))) {
        ++j;
      }
      last = j;
      if (j + 1 == n) {
        boundary = true;
      } else {
        const std::string_view gap =
            text.substr(tokens[j].end, tokens[j + 1].begin - tokens[j].end);
        const std::string& next = tokens[j + 1].text;
        const bool next_starts =
            std::isupper(static_cast<unsigned char>(next[0])) != 0 || is_opener(next);
        bool strong = false;
        for (std::size_t k = t; k <= j; ++k) {
          strong = strong || (is_terminal_punct(tokens[k].text) && tokens[k].text != ".");
        }
        bool abbreviation = false;
        if (!strong && tokens[t].text == "." && t > 0 && tokens[t - 1].end == tokens[t].begin) {
          const std::string& prev = tokens[t - 1].text;
          abbreviation = is_abbreviation(to_lower(prev)) ||
                         (prev.size() == 1 && std::isupper(static_cast<unsigned char>(prev[0])));
        }
        boundary = (!gap.empty() && next_starts && !abbreviation) || has_blank_line(gap);
      }
      t = j;
    } else if (t + 1 < n) {
      boundary = has_blank_line(text.substr(tokens[t].end, tokens[t + 1].begin - tokens[t].end));
    }

    if (boundary) {
      sentences.push_back({start, last + 1});
      start = last + 1;
    }
  }
  if (start < n) sentences.push_back({start, n});
  return sentences;
}

}  // namespace stylebreach

#include "stylebreach/readability.hpp"

#include <cctype>
#include <cmath>

#include "stylebreach/preprocess.hpp"

namespace stylebreach {
namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

std::size_t count_syllables(std::string_view word) {
  std::string w;
  for (const char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (w.empty()) return 0;

  std::size_t count = 0;
  bool in_group = false;
  for (const char c : w) {
    const bool vowel = is_vowel(c);
    if (vowel && !in_group) ++count;
    in_group = vowel;
  }
  const std::size_t n = w.size();
  if (count > 1 && w[n - 1] == 'e' && !(n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]))) {
    --count;
  } else if (count > 1 && n >= 3 && w[n - 2] == 'e' && w[n - 1] == 'd' && w[n - 3] != 't' &&
             w[n - 3] != 'd' && !is_vowel(w[n - 3])) {
    --count;
  } else if (count > 1 && n >= 3 && w[n - 2] == 'e' && w[n - 1] == 's' &&
             std::string_view("sxzcgh").find(w[n - 3]) == std::string_view::npos &&
             !is_vowel(w[n - 3])) {
    --count;
  }
  return count == 0 ? 1 : count;
}

std::array<std::string_view, kReadabilityDimension> readability_names() {
  return {"flesch_reading_ease", "smog_grade",       "flesch_kincaid_grade",
          "coleman_liau_index",  "automated_readability_index", "dale_chall_score",
          "difficult_words",     "linsear_write",    "gunning_fog"};
}

TextCounts count_text(std::span<const std::string> words, std::span<const std::size_t> sentence_lengths,
                      const std::unordered_set<std::string>& easy_words) {
  TextCounts c;
  for (const auto len : sentence_lengths) {
    if (len > 0) c.sentences += 1;
  }
  std::size_t index = 0;
  std::size_t sentence = 0;
  std::size_t consumed_in_sentence = 0;
  std::size_t last_linsear_sentence = 0;
  for (const auto& word : words) {
    while (sentence < sentence_lengths.size() && consumed_in_sentence >= sentence_lengths[sentence]) {
      ++sentence;
      consumed_in_sentence = 0;
    }
    ++consumed_in_sentence;

    const std::size_t syllables = count_syllables(word);
    c.words += 1;
    c.syllables += static_cast<double>(syllables);
    for (const char ch : word) {
      if (std::isalpha(static_cast<unsigned char>(ch))) c.letters += 1;
      if (std::isalnum(static_cast<unsigned char>(ch))) c.characters += 1;
    }
    if (syllables >= 3) c.polysyllables += 1;
    if (syllables >= 2 && !easy_words.contains(normalize_word(word))) c.difficult_words += 1;
    if (index < 100) {
      if (syllables < 3) {
        c.linsear_easy += 1;
      } else {
        c.linsear_hard += 1;
      }
      last_linsear_sentence = sentence;
    }
    ++index;
  }
  if (c.words > 0 && c.sentences == 0) c.sentences = 1;
  c.linsear_sentences = c.words > 0 ? static_cast<double>(last_linsear_sentence + 1) : 0.0;
  if (c.linsear_sentences > c.sentences) c.linsear_sentences = c.sentences;
  return c;
}

double flesch_reading_ease(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  return 206.835 - 1.015 * ratio(c.words, c.sentences) - 84.6 * ratio(c.syllables, c.words);
}

double flesch_kincaid_grade(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  return 0.39 * ratio(c.words, c.sentences) + 11.8 * ratio(c.syllables, c.words) - 15.59;
}

double smog_grade(const TextCounts& c) {
  if (c.sentences == 0) return 0.0;
  return 1.043 * std::sqrt(c.polysyllables * 30.0 / c.sentences) + 3.1291;
}

double coleman_liau_index(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  const double letters_per_100 = 100.0 * c.letters / c.words;
  const double sentences_per_100 = 100.0 * c.sentences / c.words;
  return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
}

double automated_readability_index(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  return 4.71 * ratio(c.characters, c.words) + 0.5 * ratio(c.words, c.sentences) - 21.43;
}

double dale_chall_score(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  const double difficult_pct = 100.0 * c.difficult_words / c.words;
  double score = 0.1579 * difficult_pct + 0.0496 * ratio(c.words, c.sentences);
  if (difficult_pct > 5.0) score += 3.6365;
  return score;
}

double linsear_write(const TextCounts& c) {
  if (c.linsear_sentences == 0) return 0.0;
  double r = (c.linsear_easy + 3.0 * c.linsear_hard) / c.linsear_sentences;
  if (r <= 20.0) r -= 2.0;
  return r / 2.0;
}

double gunning_fog(const TextCounts& c) {
  if (c.words == 0) return 0.0;
  return 0.4 * (ratio(c.words, c.sentences) + 100.0 * c.polysyllables / c.words);
}

std::array<double, kReadabilityDimension> readability_scores(const TextCounts& c) {
  return {flesch_reading_ease(c),        smog_grade(c),       flesch_kincaid_grade(c),
          coleman_liau_index(c),         automated_readability_index(c), dale_chall_score(c),
          c.difficult_words,             linsear_write(c),    gunning_fog(c)};
}

}  // namespace stylebreach

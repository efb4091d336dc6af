#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>

namespace stylebreach {

/// Vowel-group syllable heuristic: counts runs of [aeiouy], drops a silent
/// final 'e' (but not consonant + "le") and a silent "-ed"/"-es" ending;
/// never less than one for a word with letters.
std::size_t count_syllables(std::string_view word);

/// Surface counts the readability indices are computed from.
struct TextCounts {
  double words = 0;
  double sentences = 0;
  double syllables = 0;
  double letters = 0;          // alphabetic characters in words
  double characters = 0;       // alphanumeric characters in words
  double polysyllables = 0;    // words with >= 3 syllables
  double difficult_words = 0;  // not on the easy list and >= 2 syllables
  double linsear_easy = 0;     // among the first 100 words: < 3 syllables
  double linsear_hard = 0;     // among the first 100 words: >= 3 syllables
  double linsear_sentences = 0;  // sentences spanned by those first 100 words
};

inline constexpr std::size_t kReadabilityDimension = 9;

/// Order: flesch_reading_ease, smog_grade, flesch_kincaid_grade,
/// coleman_liau_index, automated_readability_index, dale_chall_score,
/// difficult_words, linsear_write, gunning_fog.
std::array<std::string_view, kReadabilityDimension> readability_names();

/// `sentence_lengths` gives the word count of each sentence in order.
TextCounts count_text(std::span<const std::string> words, std::span<const std::size_t> sentence_lengths,
                      const std::unordered_set<std::string>& easy_words);

std::array<double, kReadabilityDimension> readability_scores(const TextCounts& counts);

double flesch_reading_ease(const TextCounts& c);
double flesch_kincaid_grade(const TextCounts& c);
double smog_grade(const TextCounts& c);
double coleman_liau_index(const TextCounts& c);
double automated_readability_index(const TextCounts& c);
double dale_chall_score(const TextCounts& c);
double linsear_write(const TextCounts& c);
double gunning_fog(const TextCounts& c);

}  // namespace stylebreach

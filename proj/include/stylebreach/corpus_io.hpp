#pragma once

// PAN-style corpora on disk and synthetic multi-author documents.
//
// Layout: problem-<N>.txt (UTF-8) next to problem-<N>.truth, a JSON object
// with "changes" (bool) and/or "borders" (array of integers).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylebreach/document.hpp"
#include "stylebreach/parallel.hpp"
#include "stylebreach/preprocess.hpp"

namespace stylebreach {

struct LabeledDocument {
  Document doc;
  bool changed = false;
  std::vector<std::size_t> borders;  // sentence-boundary indices, strictly increasing
  bool has_borders = false;
};

enum class BorderFormat {
  Characters,  // code-point offsets into the source text
  Sentences,   // sentence-boundary indices
};

BorderFormat parse_border_format(std::string_view name);

struct ProblemFile {
  std::string id;  // "problem-<N>"
  std::filesystem::path text;
  std::filesystem::path truth;
};

/// problem-*.txt files of `directory`, ordered by problem number.
std::vector<ProblemFile> list_problems(const std::filesystem::path& directory);

std::vector<LabeledDocument> load_change_corpus(const std::filesystem::path& directory,
                                                const PreprocessLimits& limits = {},
                                                Execution exec = Execution::Parallel);

std::vector<LabeledDocument> load_breach_corpus(const std::filesystem::path& directory,
                                                BorderFormat format = BorderFormat::Characters,
                                                const PreprocessLimits& limits = {},
                                                Execution exec = Execution::Parallel);

/// Maps code-point offsets into doc.source onto sentence boundaries. An
/// offset inside a sentence goes to the boundary preceding it; offsets with no
/// boundary within one sentence are snapped to the nearest one with a warning.
std::vector<std::size_t> snap_character_borders(const Document& doc,
                                                std::span<const std::size_t> offsets);

/// Code-point offset in doc.source where the sentence after each boundary starts.
std::vector<std::size_t> border_character_offsets(const Document& doc,
                                                  std::span<const std::size_t> borders);

/// Writes problem-<N>.txt / .truth pairs; ids must already be "problem-<N>".
void write_corpus(const std::filesystem::path& directory, std::span<const LabeledDocument> corpus,
                  BorderFormat format = BorderFormat::Characters);

std::string read_text_file(const std::filesystem::path& path);

/// Source text of each sentence of `doc`.
std::vector<std::string> source_sentences(const Document& doc);

struct SynthesisOptions {
  std::size_t n_changes = 0;
  std::size_t min_segment_sentences = 25;
  std::size_t max_segment_sentences = 0;  // 0: every block has min_segment_sentences
};

/// Alternates sentence blocks taken from different sources; a border is
/// recorded at each switch. Throws InvalidArgument when the sources are too
/// short or fewer than two distinct sources are given for n_changes > 0.
LabeledDocument synthesize_document(std::string id, std::span<const std::string> sources,
                                    const SynthesisOptions& options, std::uint64_t seed,
                                    const PreprocessLimits& limits = {});

LabeledDocument synthesize_document(std::string id, std::span<const std::string> sources,
                                    std::size_t n_changes, std::size_t min_segment_sentences,
                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic authors

/// Stylistic habits of one synthetic author. Text drawn from a profile is not
/// meaningful prose, but its surface statistics (sentence length, vocabulary
/// tilt, function-word mix, punctuation, contractions, quoting, entity
/// spelling) are stable within an author and differ between authors.
struct AuthorProfile {
  double mean_sentence_words = 16.0;
  double sentence_words_sd = 5.0;
  double function_word_share = 0.45;
  double zipf_exponent = 1.0;
  double topic_share = 0.1;
  double contraction_rate = 0.1;  // per sentence
  double contracted_share = 0.5;  // contracted vs expanded form
  double comma_rate = 0.06;       // per word
  double semicolon_rate = 0.01;
  double colon_rate = 0.005;
  double question_rate = 0.05;    // per sentence
  double exclamation_rate = 0.02;
  double parenthesis_rate = 0.03;
  double quote_rate = 0.05;
  bool double_quotes = true;
  double entity_rate = 0.15;      // per sentence
  double entity_variant_rate = 0.0;
  double number_rate = 0.02;
  double ellipsis_rate = 0.0;
  std::vector<double> function_weights;  // aligned with AuthorVocabulary::function_words
  std::vector<std::string> topic_words;
  std::vector<std::string> entities;
  std::vector<std::string> entity_variants;  // same length as entities
};

/// Word pools the synthetic authors draw from.
struct AuthorVocabulary {
  std::vector<std::string> function_words;  // sorted
  std::vector<std::string> content_words;   // by descending frequency
  std::vector<ContractionPair> contractions;

  static AuthorVocabulary from_lexicon(const Lexicon& lexicon, std::size_t content_words = 5000);
};

AuthorProfile random_author_profile(const AuthorVocabulary& vocabulary, std::uint64_t seed);

/// `sentences` sentences of text in the author's style, separated by spaces.
std::string generate_author_text(const AuthorProfile& profile, const AuthorVocabulary& vocabulary,
                                 std::size_t sentences, std::uint64_t seed);

struct SyntheticCorpusOptions {
  std::size_t documents = 100;
  double changed_fraction = 0.5;
  std::size_t min_changes = 1;
  std::size_t max_changes = 1;
  std::size_t min_segment_sentences = 10;
  std::size_t max_segment_sentences = 20;
  std::size_t authors = 20;
  std::size_t source_sentences = 200;
  std::size_t first_problem = 1;
};

/// Documents named problem-<first_problem + i>. Unchanged documents get the
/// length of a changed document with a random number of changes, so length
/// alone does not reveal the label.
std::vector<LabeledDocument> synthesize_corpus(const SyntheticCorpusOptions& options,
                                               const AuthorVocabulary& vocabulary,
                                               std::uint64_t seed);

}  // namespace stylebreach

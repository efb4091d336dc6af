#pragma once

// Stylometric feature groups.
//
// Whole-document groups: Tautology, Contractions, StatementBoundary,
// QuotationMarks, NamedEntitySpelling. Per-segment groups aggregate segment
// vectors with max_pairwise_diff: FrequentWords over four fixed segments,
// Lexical, Readability and VocabularyRichness over sliding windows.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stylebreach/document.hpp"
#include "stylebreach/parallel.hpp"
#include "stylebreach/pos_tagger.hpp"
#include "stylebreach/preprocess.hpp"

namespace stylebreach {

enum class FeatureGroup {
  Tautology,
  Contractions,
  StatementBoundary,
  QuotationMarks,
  Readability,
  FrequentWords,
  Lexical,
  VocabularyRichness,
  NamedEntitySpelling,
};

inline constexpr std::array<FeatureGroup, 9> kAllFeatureGroups = {
    FeatureGroup::Tautology,          FeatureGroup::Contractions,
    FeatureGroup::StatementBoundary,  FeatureGroup::QuotationMarks,
    FeatureGroup::Readability,        FeatureGroup::FrequentWords,
    FeatureGroup::Lexical,            FeatureGroup::VocabularyRichness,
    FeatureGroup::NamedEntitySpelling};

/// The seven groups stacked by default.
std::vector<FeatureGroup> default_stack_groups();

/// Machine name, e.g. "vocabulary_richness".
std::string_view group_id(FeatureGroup group);
/// Report name, e.g. "Vocabulary Richness".
std::string_view group_display_name(FeatureGroup group);
/// Accepts either the machine name or the display name; throws InvalidArgument.
FeatureGroup parse_feature_group(std::string_view name);

struct FeatureGroupVector {
  FeatureGroup group = FeatureGroup::Tautology;
  std::vector<double> values;

  bool operator==(const FeatureGroupVector&) const = default;
};

inline constexpr std::size_t kTautologyDimension = 5;
inline constexpr std::size_t kLexicalDimension = 34;

/// Names of the lexical ratios, in vector order.
const std::array<std::string_view, kLexicalDimension>& lexical_feature_names();

// ---------------------------------------------------------------------------
// Statement-boundary word scores

/// Position score of a word at 0-based position p in a statement of length L:
/// x = |L/2 - (p+1)| / (L/2), score = k x / ((1 + k) - x).
double half_sigmoid_score(double x, double k);
double relative_boundary_distance(std::size_t position, std::size_t length);

enum class BoundaryScoreMode {
  Position,  // averaged half-sigmoid position score
  Count,     // max of the min-max rescaled begin/end counts
};

class BoundaryScoreTable {
 public:
  struct Entry {
    double position_score = 0.0;  // mean over occurrences
    std::size_t occurrences = 0;
    std::size_t begin_count = 0;
    std::size_t end_count = 0;
    double begin_rescaled = 0.0;
    double end_rescaled = 0.0;
  };

  BoundaryScoreTable() = default;

  /// `statements` are lowercase, stop-word-filtered word lists.
  static BoundaryScoreTable build(std::span<const std::vector<std::string>> statements,
                                  double k = 100.0);

  double steepness() const { return k_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view word) const;

  /// Score in [0,1]; 0 for words not in the table.
  double score(std::string_view word, BoundaryScoreMode mode = BoundaryScoreMode::Position) const;

  /// Top-n words by rescaled begin (or end) count, ties broken alphabetically.
  std::vector<std::pair<std::string, double>> top_begin_words(std::size_t n) const;
  std::vector<std::pair<std::string, double>> top_end_words(std::size_t n) const;

  static BoundaryScoreTable from_entries(std::map<std::string, Entry> entries, double k);

 private:
  std::map<std::string, Entry> entries_;
  double k_ = 100.0;
};

/// Lowercase alphabetic words among `tokens`, stop words removed.
std::vector<std::string> statement_words(std::span<const Token> tokens, const Lexicon& lexicon);

/// Statements of a document whose author borders (sentence-boundary indices)
/// are known: one word list per author block.
std::vector<std::vector<std::string>> statements_from_borders(const Document& doc,
                                                              std::span<const std::size_t> borders,
                                                              const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// Individual extractors

/// For n = 1..5: total n-gram occurrences / distinct n-grams (0 when none).
std::vector<double> tautology_values(std::span<const std::string> words);
FeatureGroupVector tautology_features(const Document& doc);

FeatureGroupVector contraction_features(const Document& doc, const Lexicon& lexicon);

FeatureGroupVector quotation_feature(const Document& doc, const Lexicon& lexicon);

/// log2(f(the) / f(word)), nullopt when the word has no frequency entry.
std::optional<double> word_frequency_class(std::string_view lowercase_word, const Lexicon& lexicon);

/// [mean frequency class of known words, unknown-word ratio] over the
/// alphabetic words of `tokens`.
std::vector<double> vocabulary_richness_values(std::span<const std::string> tokens,
                                               const Lexicon& lexicon);

/// Per frequent word, occurrences per segment token; aggregated by max_pairwise_diff.
std::vector<double> frequent_word_values(std::span<const std::vector<std::string>> segments,
                                         const Lexicon& lexicon);

/// Readability indices of one run of tokens. `sentence_lengths` holds the
/// token count of each (possibly clipped) sentence in order.
std::vector<double> readability_values(std::span<const std::string> tokens,
                                       std::span<const std::size_t> sentence_lengths,
                                       const Lexicon& lexicon);

/// Token as seen by the lexical group: phase-2 filtered text plus layout
/// context from the original document.
struct LexicalToken {
  std::string text;
  std::size_t sentence = 0;
  bool sentence_initial = false;
  std::size_t gap_spaces = 0;      // whitespace characters before the token
  bool paragraph_break = false;    // a blank line precedes the token
};

std::vector<LexicalToken> lexical_stream(const Document& doc, const Lexicon& lexicon,
                                         const PreprocessLimits& limits = {});

/// Lexical ratios of a run of lexical tokens; `tags` aligns with `stream`.
std::vector<double> lexical_values(std::span<const LexicalToken> stream, std::span<const PosTag> tags);

struct NamedEntityCounts {
  std::map<std::string, std::size_t> counts;  // spelling -> occurrences
};

/// Capitalized tokens that do not open a sentence, merged into runs.
NamedEntityCounts named_entity_candidates(const Document& doc, const Lexicon& lexicon,
                                          std::size_t min_length = 4);
/// [variant groups with >= 2 spellings, sum of the minimum spelling count per group].
std::vector<double> named_entity_spelling_values(const NamedEntityCounts& entities);

/// Number of 3-word windows with >= 2 words scoring above `threshold`,
/// divided by the number of filtered words.
double statement_boundary_value(std::span<const std::string> words, const BoundaryScoreTable& table,
                                double threshold, BoundaryScoreMode mode = BoundaryScoreMode::Position);

// ---------------------------------------------------------------------------
// Registry-driven extraction

struct FeatureConfig {
  std::size_t segments = 4;
  double window_overlap = 1.0 / 3.0;
  double boundary_threshold = 0.5;
  BoundaryScoreMode boundary_mode = BoundaryScoreMode::Position;
  std::size_t entity_min_length = 4;
  PreprocessLimits limits;
};

class FeatureExtractor {
 public:
  explicit FeatureExtractor(const Lexicon& lexicon, FeatureConfig config = {},
                            std::shared_ptr<const BoundaryScoreTable> boundary_table = nullptr);

  const Lexicon& lexicon() const { return *lexicon_; }
  const FeatureConfig& config() const { return config_; }
  const std::shared_ptr<const BoundaryScoreTable>& boundary_table() const { return boundary_table_; }

  std::size_t dimension(FeatureGroup group) const;
  std::vector<std::string> feature_names(FeatureGroup group) const;

  /// Throws InvalidArgument on an empty document.
  FeatureGroupVector extract(FeatureGroup group, const Document& doc) const;
  std::vector<FeatureGroupVector> extract(std::span<const FeatureGroup> groups, const Document& doc) const;

 private:
  const Lexicon* lexicon_;
  FeatureConfig config_;
  std::shared_ptr<const BoundaryScoreTable> boundary_table_;
  RuleTagger tagger_;
};

/// One matrix per group, rows aligned with the input documents.
struct FeatureTable {
  std::vector<FeatureGroup> groups;
  std::vector<Eigen::MatrixXd> matrices;

  const Eigen::MatrixXd& matrix(FeatureGroup group) const;
};

FeatureTable extract_feature_table(const FeatureExtractor& extractor, std::span<const Document> docs,
                                   std::span<const FeatureGroup> groups,
                                   Execution exec = Execution::Parallel);

/// TSV with an `id` column followed by `group.feature` columns.
void write_feature_tsv(std::ostream& out, const FeatureExtractor& extractor,
                       const FeatureTable& table, std::span<const std::string> ids);

}  // namespace stylebreach

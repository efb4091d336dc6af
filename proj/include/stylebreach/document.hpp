#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stylebreach/preprocess.hpp"

namespace stylebreach {

/// Half-open range of sentence indices.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const SentenceSpan&) const = default;
};

/// A tokenized document. `source` is the text as supplied; `text` is its
/// phase-1 normalization, and token spans index into `text`.
///
/// Invariants: sentences are contiguous, disjoint and cover every token.
struct Document {
  std::string id;
  std::string source;
  std::string text;
  std::vector<Token> tokens;
  std::vector<TokenRange> sentences;
  std::vector<Replacement> replacements;

  std::size_t token_count() const { return tokens.size(); }
  std::size_t sentence_count() const { return sentences.size(); }

  /// Maps a byte offset in `text` to the corresponding offset in `source`.
  std::size_t to_source_offset(std::size_t text_offset) const;
  /// Inverse of to_source_offset; offsets inside a replaced span map to its start.
  std::size_t from_source_offset(std::size_t source_offset) const;

  /// Offset in `text` where sentence s begins / the previous one ends.
  std::size_t sentence_begin_offset(std::size_t s) const;
  std::size_t sentence_end_offset(std::size_t s) const;

  /// Sub-document made of sentences [first, last). Tokens and sentences are
  /// rebased; the slice's source is its normalized text.
  Document slice(SentenceSpan span) const;

  bool operator==(const Document&) const = default;
};

Document make_document(std::string id, std::string_view source, const PreprocessLimits& limits = {});

}  // namespace stylebreach

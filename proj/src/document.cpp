#include "stylebreach/document.hpp"

#include <algorithm>

#include "stylebreach/error.hpp"

namespace stylebreach {

std::size_t Document::to_source_offset(std::size_t text_offset) const {
  std::size_t shift_norm = 0;
  std::size_t shift_source = 0;
  for (const auto& r : replacements) {
    if (r.norm_begin > text_offset) break;
    if (text_offset < r.norm_end) return r.source_begin;
    shift_norm = r.norm_end;
    shift_source = r.source_end;
  }
  return shift_source + (text_offset - shift_norm);
}

std::size_t Document::from_source_offset(std::size_t source_offset) const {
  std::size_t shift_norm = 0;
  std::size_t shift_source = 0;
  for (const auto& r : replacements) {
    if (r.source_begin > source_offset) break;
    if (source_offset < r.source_end) return r.norm_begin;
    shift_norm = r.norm_end;
    shift_source = r.source_end;
  }
  return shift_norm + (source_offset - shift_source);
}

std::size_t Document::sentence_begin_offset(std::size_t s) const {
  if (s >= sentences.size()) return text.size();
  return tokens[sentences[s].begin].begin;
}

std::size_t Document::sentence_end_offset(std::size_t s) const {
  if (s >= sentences.size()) return text.size();
  return tokens[sentences[s].end - 1].end;
}

Document Document::slice(SentenceSpan span) const {
  if (span.begin >= span.end || span.end > sentences.size()) {
    throw InvalidArgument("sentence slice [" + std::to_string(span.begin) + ", " +
                          std::to_string(span.end) + ") out of range for " +
                          std::to_string(sentences.size()) + " sentences");
  }
  Document out;
  out.id = id;
  const std::size_t first_token = sentences[span.begin].begin;
  const std::size_t last_token = sentences[span.end - 1].end;
  const std::size_t char_begin = tokens[first_token].begin;
  const std::size_t char_end = tokens[last_token - 1].end;
  out.text = text.substr(char_begin, char_end - char_begin);
  out.source = out.text;
  out.tokens.reserve(last_token - first_token);
  for (std::size_t t = first_token; t < last_token; ++t) {
    out.tokens.push_back({tokens[t].text, tokens[t].begin - char_begin, tokens[t].end - char_begin});
  }
  out.sentences.reserve(span.size());
  for (std::size_t s = span.begin; s < span.end; ++s) {
    out.sentences.push_back({sentences[s].begin - first_token, sentences[s].end - first_token});
  }
  return out;
}

Document make_document(std::string id, std::string_view source, const PreprocessLimits& limits) {
  Document doc;
  doc.id = std::move(id);
  doc.source = std::string(source);
  auto normalized = phase1_normalize_mapped(source, limits);
  doc.text = std::move(normalized.text);
  doc.replacements = std::move(normalized.replacements);
  auto tokenized = tokenize(doc.text);
  doc.tokens = std::move(tokenized.tokens);
  doc.sentences = std::move(tokenized.sentences);
  return doc;
}

}  // namespace stylebreach

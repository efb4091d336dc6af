#pragma once

// Recursive bisection of a document into single-author fragments, driven by
// a change detector scored on sentence spans.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylebreach/corpus_io.hpp"
#include "stylebreach/document.hpp"
#include "stylebreach/parallel.hpp"

namespace stylebreach {

class ChangeDetector;

struct LocatorConfig {
  double threshold = 0.75;
  std::size_t min_sentences = 20;
  // Fragments below min_sentences reached by a split emit their midpoint
  // without being scored.
  bool emit_untested_halves = false;

  /// Throws InvalidArgument unless 0 < threshold < 1 and min_sentences >= 2.
  void validate() const;
};

/// P(changed) for sentences [span.begin, span.end) of doc. Must be reentrant.
using SpanDetector = std::function<double(const Document& doc, SentenceSpan span)>;

/// Scores the whole document directly and any other span via doc.slice().
SpanDetector span_detector(const ChangeDetector& detector);

struct BreachSet {
  std::string doc_id;
  std::vector<std::size_t> borders;  // absolute sentence indices, strictly increasing
  std::size_t depth = 0;             // most bisections on any root-to-leaf path
  std::size_t detector_calls = 0;
};

BreachSet locate_breaches(const Document& doc, const SpanDetector& detector, const LocatorConfig& config,
                          Execution exec = Execution::Serial);

std::vector<BreachSet> locate_corpus(std::span<const Document> docs, const SpanDetector& detector,
                                     const LocatorConfig& config, Execution exec = Execution::Parallel);

/// {"borders": [...]} in sentence indices or code-point offsets.
nlohmann::json breaches_to_json(const Document& doc, const BreachSet& breaches, BorderFormat format);

}  // namespace stylebreach

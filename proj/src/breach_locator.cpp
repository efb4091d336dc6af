#include "stylebreach/breach_locator.hpp"

#include <algorithm>
#include <utility>

#include "stylebreach/error.hpp"
#include "stylebreach/stacking.hpp"

namespace stylebreach {
namespace {

struct Outcome {
  std::vector<std::size_t> borders;
  std::size_t depth = 0;
  std::size_t calls = 0;
};

class Locator {
 public:
  Locator(const Document& doc, const SpanDetector& detector, const LocatorConfig& config, Execution exec)
      : doc_(doc), detector_(detector), config_(config), exec_(exec) {}

  Outcome run(SentenceSpan span, bool from_split) const {
    Outcome out;
    const std::size_t n = span.size();
    if (n < 2) return out;
    const std::size_t middle = span.begin + n / 2;
    if (n < config_.min_sentences && from_split && config_.emit_untested_halves) {
      out.borders.push_back(middle);
      return out;
    }
    const double p = detector_(doc_, span);
    out.calls = 1;
    if (!(p >= config_.threshold)) return out;
    if (n < config_.min_sentences) {
      out.borders.push_back(middle);
      return out;
    }
    const SentenceSpan halves[2] = {{span.begin, middle}, {middle, span.end}};
    Outcome parts[2];
    for_each_index(2, exec_, [&](std::size_t i) { parts[i] = run(halves[i], true); });
    out.calls += parts[0].calls + parts[1].calls;
    out.depth = 1 + std::max(parts[0].depth, parts[1].depth);
    if (parts[0].borders.empty() && parts[1].borders.empty()) {
      out.borders.push_back(middle);
    } else {
      out.borders = std::move(parts[0].borders);
      out.borders.insert(out.borders.end(), parts[1].borders.begin(), parts[1].borders.end());
    }
    return out;
  }

 private:
  const Document& doc_;
  const SpanDetector& detector_;
  const LocatorConfig& config_;
  Execution exec_;
};

}  // namespace

void LocatorConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("locator threshold must lie strictly between 0 and 1, got " + std::to_string(threshold));
  }
  if (min_sentences < 2) throw InvalidArgument("locator min_sentences must be at least 2");
}

SpanDetector span_detector(const ChangeDetector& detector) {
  return [&detector](const Document& doc, SentenceSpan span) {
    if (span.begin == 0 && span.end == doc.sentences.size()) return detector.probability(doc);
    return detector.probability(doc.slice(span));
  };
}

BreachSet locate_breaches(const Document& doc, const SpanDetector& detector, const LocatorConfig& config,
                          Execution exec) {
  config.validate();
  const Locator locator(doc, detector, config, exec);
  Outcome out = locator.run({0, doc.sentences.size()}, false);
  return {doc.id, std::move(out.borders), out.depth, out.calls};
}

std::vector<BreachSet> locate_corpus(std::span<const Document> docs, const SpanDetector& detector,
                                     const LocatorConfig& config, Execution exec) {
  config.validate();
  std::vector<BreachSet> out(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) {
    out[i] = locate_breaches(docs[i], detector, config, Execution::Serial);
  });
  return out;
}

nlohmann::json breaches_to_json(const Document& doc, const BreachSet& breaches, BorderFormat format) {
  if (format == BorderFormat::Sentences) return {{"borders", breaches.borders}};
  return {{"borders", border_character_offsets(doc, breaches.borders)}};
}

}  // namespace stylebreach

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "stylebreach/corpus_io.hpp"
#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
namespace {

class WeightedPicker {
 public:
  explicit WeightedPicker(std::span<const double> weights) : cumulative_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
  }
  std::size_t pick(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

bool plain_word(const std::string& w) {
  return w.size() >= 3 && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string make_name(Rng& rng) {
  static constexpr const char* kOnsets[] = {"b", "br", "c", "d", "dr", "f", "g", "gr", "h", "k",
                                            "l", "m", "n", "p", "r", "s", "st", "t", "tr", "v", "z"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ei", "ou"};
  static constexpr const char* kCodas[] = {"", "n", "r", "l", "s", "th", "nd", "m", "x"};
  std::string name;
  const std::size_t syllables = rng.uniform_int(2, 3);
  for (std::size_t i = 0; i < syllables; ++i) {
    name += kOnsets[rng.uniform_index(std::size(kOnsets))];
    name += kVowels[rng.uniform_index(std::size(kVowels))];
    if (i + 1 == syllables) name += kCodas[rng.uniform_index(std::size(kCodas))];
  }
  name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

// One-edit variant: doubled or dropped inner letter.
std::string spelling_variant(const std::string& name, Rng& rng) {
  std::string v = name;
  const std::size_t pos = 1 + rng.uniform_index(name.size() - 1);
  if (rng.bernoulli(0.5) && name.size() > 4) {
    v.erase(pos, 1);
  } else {
    v.insert(pos, 1, name[pos]);
  }
  return v;
}

void capitalize(std::string& word) {
  if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
}

}  // namespace

AuthorVocabulary AuthorVocabulary::from_lexicon(const Lexicon& lexicon, std::size_t content_words) {
  AuthorVocabulary v;
  for (const auto& w : lexicon.function_words) {
    if (w.find_first_of(" '") == std::string::npos && w.size() > 1) v.function_words.push_back(w);
  }
  std::sort(v.function_words.begin(), v.function_words.end());
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [word, freq] : lexicon.frequency) {
    if (!plain_word(word) || lexicon.stop_words.contains(word) ||
        lexicon.function_words.contains(word) || !lexicon.common_words.contains(word)) {
      continue;
    }
    ranked.emplace_back(-freq, word);
  }
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > content_words) ranked.resize(content_words);
  for (auto& [f, w] : ranked) v.content_words.push_back(std::move(w));
  v.contractions = lexicon.contractions;
  if (v.function_words.empty() || v.content_words.size() < 100) {
    throw InvalidArgument("lexicon too small to draw synthetic authors from");
  }
  return v;
}

AuthorProfile random_author_profile(const AuthorVocabulary& vocabulary, std::uint64_t seed) {
  Rng rng(seed);
  AuthorProfile p;
  p.mean_sentence_words = rng.uniform(8.0, 28.0);
  p.sentence_words_sd = p.mean_sentence_words * rng.uniform(0.15, 0.45);
  p.function_word_share = rng.uniform(0.30, 0.60);
  p.zipf_exponent = rng.uniform(0.6, 1.3);
  p.topic_share = rng.uniform(0.02, 0.15);
  p.contraction_rate = rng.uniform(0.0, 0.5);
  p.contracted_share = rng.bernoulli(0.5) ? rng.uniform(0.7, 1.0) : rng.uniform(0.0, 0.3);
  p.comma_rate = rng.uniform(0.01, 0.12);
  p.semicolon_rate = rng.bernoulli(0.3) ? rng.uniform(0.005, 0.03) : 0.0;
  p.colon_rate = rng.bernoulli(0.3) ? rng.uniform(0.002, 0.015) : 0.0;
  p.question_rate = rng.uniform(0.0, 0.2);
  p.exclamation_rate = rng.bernoulli(0.4) ? rng.uniform(0.02, 0.15) : 0.0;
  p.parenthesis_rate = rng.bernoulli(0.5) ? rng.uniform(0.02, 0.15) : 0.0;
  p.quote_rate = rng.uniform(0.0, 0.2);
  p.double_quotes = rng.bernoulli(0.6);
  p.entity_rate = rng.uniform(0.05, 0.4);
  p.entity_variant_rate = rng.bernoulli(0.3) ? rng.uniform(0.2, 0.5) : 0.0;
  p.number_rate = rng.uniform(0.0, 0.1);
  p.ellipsis_rate = rng.bernoulli(0.2) ? rng.uniform(0.02, 0.1) : 0.0;

  p.function_weights.resize(vocabulary.function_words.size());
  for (std::size_t i = 0; i < p.function_weights.size(); ++i) {
    // Zipf-like base over the sorted list, reshuffled per author below.
    p.function_weights[i] = std::exp(0.9 * rng.normal()) / std::sqrt(1.0 + i % 40);
  }
  rng.shuffle(p.function_weights);

  const std::size_t topic_pool = vocabulary.content_words.size();
  const std::size_t topic_first = std::min<std::size_t>(200, topic_pool / 2);
  for (const auto i : rng.sample_without_replacement(topic_pool - topic_first, 30)) {
    p.topic_words.push_back(vocabulary.content_words[topic_first + i]);
  }
  const std::size_t entities = rng.uniform_int(3, 8);
  for (std::size_t i = 0; i < entities; ++i) {
    p.entities.push_back(make_name(rng));
    p.entity_variants.push_back(spelling_variant(p.entities.back(), rng));
  }
  return p;
}

std::string generate_author_text(const AuthorProfile& profile, const AuthorVocabulary& vocabulary,
                                 std::size_t sentences, std::uint64_t seed) {
  if (profile.function_weights.size() != vocabulary.function_words.size()) {
    throw InvalidArgument("author profile does not match the vocabulary");
  }
  Rng rng(seed);
  std::vector<double> content_weights(vocabulary.content_words.size());
  for (std::size_t r = 0; r < content_weights.size(); ++r) {
    content_weights[r] = std::pow(static_cast<double>(r + 1), -profile.zipf_exponent);
  }
  const WeightedPicker content(content_weights);
  const WeightedPicker function(profile.function_weights);
  const std::string open_quote = profile.double_quotes ? "\"" : "'";

  const auto sentence_once = [&]() {
    const double drawn = profile.mean_sentence_words + profile.sentence_words_sd * rng.normal();
    const auto length = static_cast<std::size_t>(std::max(4.0, std::round(drawn)));
    std::vector<std::string> words;
    words.reserve(length + 4);
    for (std::size_t i = 0; i < length; ++i) {
      const double u = rng.uniform01();
      if (u < profile.function_word_share) {
        words.push_back(vocabulary.function_words[function.pick(rng)]);
      } else if (u < profile.function_word_share + profile.topic_share) {
        words.push_back(profile.topic_words[rng.uniform_index(profile.topic_words.size())]);
      } else {
        words.push_back(vocabulary.content_words[content.pick(rng)]);
      }
    }
    const auto insert_at = [&](std::string w) {
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(1 + rng.uniform_index(words.size())),
                   std::move(w));
    };
    if (!vocabulary.contractions.empty() && rng.bernoulli(profile.contraction_rate)) {
      const auto& pair = vocabulary.contractions[rng.uniform_index(vocabulary.contractions.size())];
      if (rng.bernoulli(profile.contracted_share)) {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size())),
                     pair.contracted);
      } else {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size())),
                     pair.expanded);
      }
    }
    if (!profile.entities.empty() && rng.bernoulli(profile.entity_rate)) {
      const std::size_t e = rng.uniform_index(profile.entities.size());
      insert_at(rng.bernoulli(profile.entity_variant_rate) ? profile.entity_variants[e]
                                                           : profile.entities[e]);
    }
    if (rng.bernoulli(profile.number_rate)) insert_at(std::to_string(rng.uniform_int(2, 2030)));

    for (auto& w : words) {
      if (w == "i") w = "I";
    }
    capitalize(words.front());

    // Wrap a short inner run in parentheses or quotes.
    const auto wrap = [&](const std::string& open, const std::string& close) {
      if (words.size() < 5) return;
      const std::size_t first = 1 + rng.uniform_index(words.size() - 3);
      const std::size_t last = std::min(words.size() - 2, first + rng.uniform_int(1, 3));
      words[first] = open + words[first];
      words[last] += close;
    };
    if (rng.bernoulli(profile.parenthesis_rate)) wrap("(", ")");
    if (rng.bernoulli(profile.quote_rate)) wrap(open_quote, open_quote);

    std::string sentence;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) sentence += ' ';
      sentence += words[i];
      if (i + 1 < words.size()) {
        const double u = rng.uniform01();
        if (u < profile.comma_rate) {
          sentence += ',';
        } else if (u < profile.comma_rate + profile.semicolon_rate) {
          sentence += ';';
        } else if (u < profile.comma_rate + profile.semicolon_rate + profile.colon_rate) {
          sentence += ':';
        }
      }
    }
    const double u = rng.uniform01();
    if (u < profile.question_rate) {
      sentence += '?';
    } else if (u < profile.question_rate + profile.exclamation_rate) {
      sentence += '!';
    } else if (u < profile.question_rate + profile.exclamation_rate + profile.ellipsis_rate) {
      sentence += "...";
    } else {
      sentence += '.';
    }
    return sentence;
  };

  // A sentence must stand alone under the splitter (no abbreviation or
  // initial before its terminator), otherwise it would merge with the next.
  const auto splits_cleanly = [](const std::string& sentence) {
    const std::string probe = sentence + " Next " + sentence;
    const auto tokenized = tokenize(probe);
    return tokenized.sentences.size() == 2;
  };

  std::string text;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string sentence = sentence_once();
    while (!splits_cleanly(sentence)) sentence = sentence_once();
    if (!text.empty()) text += ' ';
    text += sentence;
  }
  return text;
}

std::vector<LabeledDocument> synthesize_corpus(const SyntheticCorpusOptions& options,
                                               const AuthorVocabulary& vocabulary,
                                               std::uint64_t seed) {
  if (options.authors < 2 && options.changed_fraction > 0.0) {
    throw InvalidArgument("synthesize_corpus: at least two authors are needed for changes");
  }
  if (options.min_changes == 0 || options.max_changes < options.min_changes) {
    throw InvalidArgument("synthesize_corpus: need 1 <= min_changes <= max_changes");
  }
  const std::size_t max_seg = std::max(options.min_segment_sentences, options.max_segment_sentences);
  if (options.source_sentences < max_seg * (options.max_changes + 1)) {
    throw InvalidArgument("synthesize_corpus: source_sentences too small for the longest document");
  }
  std::vector<std::string> sources(options.authors);
  for (std::size_t a = 0; a < options.authors; ++a) {
    const auto profile = random_author_profile(vocabulary, mix_seed(seed, 2 * a));
    sources[a] = generate_author_text(profile, vocabulary, options.source_sentences,
                                      mix_seed(seed, 2 * a + 1));
  }

  Rng rng(mix_seed(seed, 0xC0FFEE));
  const auto changed_count =
      static_cast<std::size_t>(std::llround(options.changed_fraction * static_cast<double>(options.documents)));
  std::vector<bool> changed(options.documents, false);
  for (const auto i : rng.sample_without_replacement(options.documents, changed_count)) changed[i] = true;

  std::vector<LabeledDocument> corpus;
  corpus.reserve(options.documents);
  for (std::size_t i = 0; i < options.documents; ++i) {
    const std::string id = "problem-" + std::to_string(options.first_problem + i);
    const std::size_t k = rng.uniform_int(options.min_changes, options.max_changes);
    const std::uint64_t doc_seed = rng.next();
    SynthesisOptions synth;
    if (changed[i]) {
      synth.n_changes = k;
      synth.min_segment_sentences = options.min_segment_sentences;
      synth.max_segment_sentences = max_seg;
      corpus.push_back(synthesize_document(id, sources, synth, doc_seed));
    } else {
      std::size_t total = 0;
      for (std::size_t j = 0; j <= k; ++j) total += rng.uniform_int(options.min_segment_sentences, max_seg);
      synth.min_segment_sentences = total;
      const std::string& source = sources[rng.uniform_index(sources.size())];
      corpus.push_back(synthesize_document(id, std::span(&source, 1), synth, doc_seed));
    }
  }
  return corpus;
}

}  // namespace stylebreach

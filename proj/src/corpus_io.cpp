#include "stylebreach/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t code_points_before(std::string_view text, std::size_t byte_offset) {
  return utf8_length(text.substr(0, std::min(byte_offset, text.size())));
}

std::size_t byte_offset_of(std::string_view text, std::size_t code_point) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (seen == code_point) return i;
    ++seen;
  }
  return text.size();
}

std::size_t source_begin(const Document& doc, std::size_t s) {
  return doc.to_source_offset(doc.sentence_begin_offset(s));
}

std::size_t source_end(const Document& doc, std::size_t s) {
  return doc.to_source_offset(doc.sentence_end_offset(s));
}

struct Truth {
  std::optional<bool> changes;
  std::optional<std::vector<std::int64_t>> borders;
};

Truth parse_truth(const ProblemFile& problem) {
  std::ifstream in(problem.truth, std::ios::binary);
  if (!in) throw LoadError("missing truth file for " + problem.id + ": " + problem.truth.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(problem.truth.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(problem.truth.string() + ": truth must be a JSON object");
  Truth truth;
  if (const auto it = j.find("changes"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError(problem.truth.string() + ": \"changes\" must be a boolean");
    truth.changes = it->get<bool>();
  }
  if (const auto it = j.find("borders"); it != j.end()) {
    if (!it->is_array()) throw ParseError(problem.truth.string() + ": \"borders\" must be an array");
    std::vector<std::int64_t> borders;
    for (const auto& b : *it) {
      if (!b.is_number_integer() || b.get<std::int64_t>() < 0) {
        throw ParseError(problem.truth.string() + ": borders must be non-negative integers");
      }
      borders.push_back(b.get<std::int64_t>());
    }
    truth.borders = std::move(borders);
  }
  if (!truth.changes && !truth.borders) {
    throw ParseError(problem.truth.string() + ": neither \"changes\" nor \"borders\" present");
  }
  if (truth.changes && truth.borders && !*truth.changes && !truth.borders->empty()) {
    throw ParseError(problem.truth.string() + ": \"changes\" is false but borders are listed");
  }
  return truth;
}

Document load_document(const ProblemFile& problem, const PreprocessLimits& limits) {
  return make_document(problem.id, read_text_file(problem.text), limits);
}

std::vector<std::size_t> sentence_borders(const ProblemFile& problem, const Document& doc,
                                          std::span<const std::int64_t> raw) {
  std::vector<std::size_t> borders;
  for (const auto b : raw) {
    const auto border = static_cast<std::size_t>(b);
    if (border == 0 || border >= doc.sentence_count()) {
      throw ParseError(problem.truth.string() + ": border " + std::to_string(b) +
                       " is not a boundary of a " + std::to_string(doc.sentence_count()) +
                       "-sentence document");
    }
    if (!borders.empty() && border <= borders.back()) {
      throw ParseError(problem.truth.string() + ": borders must be strictly increasing");
    }
    borders.push_back(border);
  }
  return borders;
}

std::optional<std::uint64_t> problem_number(std::string_view id) {
  const auto dash = id.rfind('-');
  if (dash == std::string_view::npos) return std::nullopt;
  std::uint64_t n = 0;
  const auto digits = id.substr(dash + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return n;
}

}  // namespace

BorderFormat parse_border_format(std::string_view name) {
  if (name == "chars" || name == "characters") return BorderFormat::Characters;
  if (name == "sentences") return BorderFormat::Sentences;
  throw InvalidArgument("unknown border format '" + std::string(name) + "' (chars|sentences)");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  return text;
}

std::vector<ProblemFile> list_problems(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw LoadError("not a directory: " + directory.string());
  static const std::regex kName(R"(problem-.+\.txt)");
  std::vector<ProblemFile> problems;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, kName)) continue;
    ProblemFile p;
    p.id = entry.path().stem().string();
    p.text = entry.path();
    p.truth = entry.path();
    p.truth.replace_extension(".truth");
    problems.push_back(std::move(p));
  }
  std::sort(problems.begin(), problems.end(), [](const ProblemFile& a, const ProblemFile& b) {
    const auto na = problem_number(a.id);
    const auto nb = problem_number(b.id);
    if (na && nb && *na != *nb) return *na < *nb;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return a.id < b.id;
  });
  return problems;
}

std::vector<LabeledDocument> load_change_corpus(const fs::path& directory,
                                                const PreprocessLimits& limits, Execution exec) {
  const auto problems = list_problems(directory);
  for (const auto& p : problems) {
    if (!fs::exists(p.truth)) throw LoadError("missing truth file for " + p.id);
  }
  std::vector<LabeledDocument> corpus(problems.size());
  for_each_index(problems.size(), exec, [&](std::size_t i) {
    const Truth truth = parse_truth(problems[i]);
    corpus[i].doc = load_document(problems[i], limits);
    corpus[i].changed = truth.changes ? *truth.changes : !truth.borders->empty();
  });
  return corpus;
}

std::vector<LabeledDocument> load_breach_corpus(const fs::path& directory, BorderFormat format,
                                                const PreprocessLimits& limits, Execution exec) {
  const auto problems = list_problems(directory);
  for (const auto& p : problems) {
    if (!fs::exists(p.truth)) throw LoadError("missing truth file for " + p.id);
  }
  std::vector<LabeledDocument> corpus(problems.size());
  for_each_index(problems.size(), exec, [&](std::size_t i) {
    const Truth truth = parse_truth(problems[i]);
    if (!truth.borders) throw ParseError(problems[i].truth.string() + ": \"borders\" missing");
    auto& item = corpus[i];
    item.doc = load_document(problems[i], limits);
    if (format == BorderFormat::Sentences) {
      item.borders = sentence_borders(problems[i], item.doc, *truth.borders);
    } else {
      std::vector<std::size_t> offsets(truth.borders->begin(), truth.borders->end());
      item.borders = snap_character_borders(item.doc, offsets);
    }
    item.has_borders = true;
    item.changed = truth.changes ? *truth.changes : !item.borders.empty();
  });
  return corpus;
}

std::vector<std::size_t> snap_character_borders(const Document& doc,
                                                std::span<const std::size_t> offsets) {
  const std::size_t n = doc.sentence_count();
  std::vector<std::size_t> borders;
  if (n < 2) {
    if (!offsets.empty()) {
      spdlog::warn("{}: {} border(s) dropped, document has fewer than two sentences", doc.id,
                   offsets.size());
    }
    return borders;
  }
  // Boundary b spans the source gap [end of sentence b-1, start of sentence b].
  std::vector<std::size_t> gap_lo(n), gap_hi(n);
  for (std::size_t b = 1; b < n; ++b) {
    gap_lo[b] = source_end(doc, b - 1);
    gap_hi[b] = source_begin(doc, b);
  }
  for (const std::size_t offset : offsets) {
    const std::size_t p = byte_offset_of(doc.source, offset);
    std::size_t border = 0;
    for (std::size_t b = 1; b < n && border == 0; ++b) {
      if (p >= gap_lo[b] && p <= gap_hi[b]) border = b;
    }
    if (border == 0) {
      for (std::size_t s = 1; s < n && border == 0; ++s) {
        if (p > gap_hi[s] && p < source_end(doc, s)) border = s;
      }
    }
    if (border == 0) {
      std::size_t best_distance = SIZE_MAX;
      for (std::size_t b = 1; b < n; ++b) {
        const std::size_t d = p < gap_lo[b] ? gap_lo[b] - p : p - gap_hi[b];
        if (d < best_distance) {
          best_distance = d;
          border = b;
        }
      }
      spdlog::warn("{}: border at character {} is not near a sentence end, snapped to boundary {}",
                   doc.id, offset, border);
    }
    borders.push_back(border);
  }
  std::sort(borders.begin(), borders.end());
  const auto before = borders.size();
  borders.erase(std::unique(borders.begin(), borders.end()), borders.end());
  if (borders.size() != before) {
    spdlog::warn("{}: {} border(s) collapsed onto the same sentence boundary", doc.id,
                 before - borders.size());
  }
  return borders;
}

std::vector<std::size_t> border_character_offsets(const Document& doc,
                                                  std::span<const std::size_t> borders) {
  std::vector<std::size_t> offsets;
  offsets.reserve(borders.size());
  for (const auto b : borders) {
    if (b == 0 || b >= doc.sentence_count()) {
      throw InvalidArgument(doc.id + ": border " + std::to_string(b) + " out of range");
    }
    offsets.push_back(code_points_before(doc.source, source_begin(doc, b)));
  }
  return offsets;
}

void write_corpus(const fs::path& directory, std::span<const LabeledDocument> corpus,
                  BorderFormat format) {
  fs::create_directories(directory);
  for (const auto& item : corpus) {
    if (!item.doc.id.starts_with("problem-") || item.doc.id.size() == 8 ||
        item.doc.id.find_first_of("/\\") != std::string::npos) {
      throw InvalidArgument("document id '" + item.doc.id + "' is not of the form problem-<N>");
    }
    {
      std::ofstream out(directory / (item.doc.id + ".txt"), std::ios::binary);
      out << item.doc.source;
      if (!out) throw Error("cannot write " + (directory / (item.doc.id + ".txt")).string());
    }
    json truth = {{"changes", item.changed}};
    if (item.has_borders) {
      truth["borders"] = format == BorderFormat::Sentences
                             ? item.borders
                             : border_character_offsets(item.doc, item.borders);
    }
    std::ofstream out(directory / (item.doc.id + ".truth"), std::ios::binary);
    out << truth.dump() << '\n';
    if (!out) throw Error("cannot write " + (directory / (item.doc.id + ".truth")).string());
  }
}

std::vector<std::string> source_sentences(const Document& doc) {
  std::vector<std::string> out;
  out.reserve(doc.sentence_count());
  for (std::size_t s = 0; s < doc.sentence_count(); ++s) {
    const auto begin = source_begin(doc, s);
    out.push_back(doc.source.substr(begin, source_end(doc, s) - begin));
  }
  return out;
}

LabeledDocument synthesize_document(std::string id, std::span<const std::string> sources,
                                    const SynthesisOptions& options, std::uint64_t seed,
                                    const PreprocessLimits& limits) {
  if (sources.empty()) throw InvalidArgument("synthesize_document: no sources");
  if (options.min_segment_sentences == 0) {
    throw InvalidArgument("synthesize_document: min_segment_sentences must be positive");
  }
  const std::size_t max_len = std::max(options.min_segment_sentences, options.max_segment_sentences);
  const std::size_t blocks = options.n_changes + 1;
  if (options.n_changes > 0) {
    bool distinct = false;
    for (std::size_t i = 1; i < sources.size() && !distinct; ++i) distinct = sources[i] != sources[0];
    if (!distinct) {
      throw InvalidArgument("synthesize_document: changes need at least two distinct sources");
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> lengths(blocks);
  for (auto& len : lengths) len = rng.uniform_int(options.min_segment_sentences, max_len);

  std::vector<std::size_t> order(blocks);
  order[0] = rng.uniform_index(sources.size());
  for (std::size_t j = 1; j < blocks; ++j) {
    std::size_t pick = rng.uniform_index(sources.size());
    while (sources[pick] == sources[order[j - 1]]) pick = rng.uniform_index(sources.size());
    order[j] = pick;
  }

  std::vector<std::optional<std::vector<std::string>>> parsed(sources.size());
  std::string text;
  std::vector<std::size_t> starts;
  LabeledDocument out;
  out.has_borders = true;
  out.changed = options.n_changes > 0;
  for (std::size_t j = 0; j < blocks; ++j) {
    auto& sentences = parsed[order[j]];
    if (!sentences) sentences = source_sentences(make_document("source", sources[order[j]], limits));
    if (sentences->size() < lengths[j]) {
      throw InvalidArgument("synthesize_document: source " + std::to_string(order[j]) + " has " +
                            std::to_string(sentences->size()) + " sentences, block needs " +
                            std::to_string(lengths[j]));
    }
    const std::size_t first = rng.uniform_index(sentences->size() - lengths[j] + 1);
    if (j > 0) out.borders.push_back(starts.size());
    for (std::size_t s = first; s < first + lengths[j]; ++s) {
      if (!text.empty()) text += ' ';
      starts.push_back(text.size());
      text += (*sentences)[s];
    }
  }

  out.doc = make_document(std::move(id), text, limits);
  bool aligned = out.doc.sentence_count() == starts.size();
  for (std::size_t s = 0; aligned && s < starts.size(); ++s) {
    aligned = source_begin(out.doc, s) == starts[s];
  }
  if (!aligned) {
    throw InvalidArgument("synthesize_document: source sentences do not re-split identically (" +
                          std::to_string(out.doc.sentence_count()) + " vs " +
                          std::to_string(starts.size()) + " sentences)");
  }
  return out;
}

LabeledDocument synthesize_document(std::string id, std::span<const std::string> sources,
                                    std::size_t n_changes, std::size_t min_segment_sentences,
                                    std::uint64_t seed) {
  SynthesisOptions options;
  options.n_changes = n_changes;
  options.min_segment_sentences = min_segment_sentences;
  return synthesize_document(std::move(id), sources, options, seed);
}

}  // namespace stylebreach

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "stylebreach/corpus_io.hpp"
#include "stylebreach/error.hpp"

namespace sb = stylebreach;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("stylebreach-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string numbered_sentences(std::size_t n, const std::string& stem = "Sentence") {
  std::string text;
  for (std::size_t i = 1; i <= n; ++i) {
    if (!text.empty()) text += ' ';
    text += stem + " number " + std::to_string(i) + " is here.";
  }
  return text;
}

const sb::AuthorVocabulary& vocabulary() {
  static const auto v = sb::AuthorVocabulary::from_lexicon(sb::Lexicon::bundled());
  return v;
}

}  // namespace

TEST(CorpusIo, LoadsChangeCorpus) {
  TempDir dir;
  write_file(dir.path() / "problem-1.txt", "One sentence. Another one.");
  write_file(dir.path() / "problem-1.truth", R"({"changes": true})");
  const auto corpus = sb::load_change_corpus(dir.path());
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].doc.id, "problem-1");
  EXPECT_TRUE(corpus[0].changed);
  EXPECT_EQ(corpus[0].doc.sentence_count(), 2u);
}

TEST(CorpusIo, EmptyDirectoryGivesEmptyCorpus) {
  TempDir dir;
  EXPECT_TRUE(sb::load_change_corpus(dir.path()).empty());
  EXPECT_TRUE(sb::load_breach_corpus(dir.path()).empty());
}

TEST(CorpusIo, ProblemsOrderedNumerically) {
  TempDir dir;
  for (const int n : {10, 2, 1}) {
    write_file(dir.path() / ("problem-" + std::to_string(n) + ".txt"), "Text.");
    write_file(dir.path() / ("problem-" + std::to_string(n) + ".truth"), R"({"changes": false})");
  }
  write_file(dir.path() / "notes.txt", "ignored");
  const auto corpus = sb::load_change_corpus(dir.path());
  ASSERT_EQ(corpus.size(), 3u);
  EXPECT_EQ(corpus[0].doc.id, "problem-1");
  EXPECT_EQ(corpus[1].doc.id, "problem-2");
  EXPECT_EQ(corpus[2].doc.id, "problem-10");
}

TEST(CorpusIo, MissingTruthNamesProblem) {
  TempDir dir;
  write_file(dir.path() / "problem-7.txt", "Text.");
  try {
    sb::load_change_corpus(dir.path());
    FAIL() << "expected LoadError";
  } catch (const sb::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("problem-7"), std::string::npos);
  }
}

TEST(CorpusIo, MalformedTruthIsParseError) {
  TempDir dir;
  write_file(dir.path() / "problem-1.txt", "Text.");
  for (const char* bad : {"{not json", R"({"changes": "yes"})", R"([true])", R"({})",
                          R"({"borders": [-1]})", R"({"changes": false, "borders": [3]})"}) {
    write_file(dir.path() / "problem-1.truth", bad);
    EXPECT_THROW(sb::load_change_corpus(dir.path()), sb::ParseError) << bad;
  }
}

TEST(CorpusIo, MissingDirectoryIsLoadError) {
  EXPECT_THROW(sb::load_change_corpus("/nonexistent/stylebreach"), sb::LoadError);
}

TEST(CorpusIo, CharacterBorderAtSentenceEnd) {
  TempDir dir;
  const std::string text = numbered_sentences(10);
  const auto doc = sb::make_document("probe", text);
  ASSERT_EQ(doc.sentence_count(), 10u);
  // End of the fifth sentence.
  const std::size_t offset = doc.sentence_end_offset(4);
  write_file(dir.path() / "problem-1.txt", text);
  write_file(dir.path() / "problem-1.truth", "{\"borders\": [" + std::to_string(offset) + "]}");
  const auto corpus = sb::load_breach_corpus(dir.path(), sb::BorderFormat::Characters);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].borders, (std::vector<std::size_t>{5}));
  EXPECT_TRUE(corpus[0].changed);
}

TEST(CorpusIo, EmptyBorders) {
  TempDir dir;
  write_file(dir.path() / "problem-1.txt", numbered_sentences(4));
  write_file(dir.path() / "problem-1.truth", R"({"borders": []})");
  const auto corpus = sb::load_breach_corpus(dir.path());
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_TRUE(corpus[0].borders.empty());
  EXPECT_TRUE(corpus[0].has_borders);
  EXPECT_FALSE(corpus[0].changed);
}

TEST(CorpusIo, SnappingRules) {
  const auto doc = sb::make_document("probe", numbered_sentences(6));
  const auto start = [&](std::size_t s) { return doc.sentence_begin_offset(s); };
  const auto end = [&](std::size_t s) { return doc.sentence_end_offset(s); };
  // Start of sentence 3 and the gap before it both map to boundary 3.
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{start(3)}),
            (std::vector<std::size_t>{3}));
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{end(2)}),
            (std::vector<std::size_t>{3}));
  // Inside sentence 4: the preceding boundary.
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{start(4) + 5}),
            (std::vector<std::size_t>{4}));
  // Inside the first sentence or beyond the text: nearest boundary.
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{2}),
            (std::vector<std::size_t>{1}));
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{100000}),
            (std::vector<std::size_t>{5}));
  // Unsorted and duplicate input.
  EXPECT_EQ(sb::snap_character_borders(doc, std::vector<std::size_t>{start(5), start(2), end(1)}),
            (std::vector<std::size_t>{2, 5}));
}

TEST(CorpusIo, CharacterOffsetsCountCodePoints) {
  const std::string text = "Caf\xC3\xA9 na\xC3\xAFve r\xC3\xA9sum\xC3\xA9. Second sentence here.";
  const auto doc = sb::make_document("utf8", text);
  ASSERT_EQ(doc.sentence_count(), 2u);
  const auto offsets = sb::border_character_offsets(doc, std::vector<std::size_t>{1});
  ASSERT_EQ(offsets.size(), 1u);
  EXPECT_EQ(offsets[0], 19u);  // 23 bytes, 4 of the characters are two bytes wide
  EXPECT_EQ(sb::snap_character_borders(doc, offsets), (std::vector<std::size_t>{1}));
}

TEST(CorpusIo, SentenceFormatValidation) {
  TempDir dir;
  write_file(dir.path() / "problem-1.txt", numbered_sentences(5));
  write_file(dir.path() / "problem-1.truth", R"({"borders": [2, 4]})");
  EXPECT_EQ(sb::load_breach_corpus(dir.path(), sb::BorderFormat::Sentences)[0].borders,
            (std::vector<std::size_t>{2, 4}));
  for (const char* bad : {R"({"borders": [5]})", R"({"borders": [0]})", R"({"borders": [3, 2]})",
                          R"({"changes": true})"}) {
    write_file(dir.path() / "problem-1.truth", bad);
    EXPECT_THROW(sb::load_breach_corpus(dir.path(), sb::BorderFormat::Sentences), sb::ParseError)
        << bad;
  }
}

TEST(CorpusIo, BorderFormatNames) {
  EXPECT_EQ(sb::parse_border_format("chars"), sb::BorderFormat::Characters);
  EXPECT_EQ(sb::parse_border_format("sentences"), sb::BorderFormat::Sentences);
  EXPECT_THROW(sb::parse_border_format("tokens"), sb::InvalidArgument);
}

TEST(Synthesis, NoChangeSingleSource) {
  const std::vector<std::string> sources = {numbered_sentences(40)};
  const auto out = sb::synthesize_document("problem-1", sources, 0, 25, 3);
  EXPECT_FALSE(out.changed);
  EXPECT_TRUE(out.borders.empty());
  EXPECT_EQ(out.doc.sentence_count(), 25u);
}

TEST(Synthesis, OneChangeBlocksOfTwentyFive) {
  const std::vector<std::string> sources = {numbered_sentences(60, "Alpha"),
                                            numbered_sentences(60, "Beta")};
  const auto out = sb::synthesize_document("problem-1", sources, 1, 25, 11);
  EXPECT_TRUE(out.changed);
  EXPECT_EQ(out.borders, (std::vector<std::size_t>{25}));
  ASSERT_EQ(out.doc.sentence_count(), 50u);
  const auto sentences = sb::source_sentences(out.doc);
  const bool first_alpha = sentences[0].starts_with("Alpha");
  for (std::size_t s = 0; s < 50; ++s) {
    EXPECT_EQ(sentences[s].starts_with("Alpha"), (s < 25) == first_alpha) << s;
  }
}

TEST(Synthesis, Deterministic) {
  const std::vector<std::string> sources = {numbered_sentences(80, "Alpha"),
                                            numbered_sentences(80, "Beta")};
  sb::SynthesisOptions options{.n_changes = 3, .min_segment_sentences = 5, .max_segment_sentences = 12};
  const auto a = sb::synthesize_document("problem-1", sources, options, 99);
  const auto b = sb::synthesize_document("problem-1", sources, options, 99);
  EXPECT_EQ(a.doc, b.doc);
  EXPECT_EQ(a.borders, b.borders);
  const auto c = sb::synthesize_document("problem-1", sources, options, 100);
  EXPECT_NE(a.doc.source, c.doc.source);
}

TEST(Synthesis, ExactlyKBordersAtSourceSwitches) {
  const std::vector<std::string> sources = {numbered_sentences(100, "Alpha"),
                                            numbered_sentences(100, "Beta"),
                                            numbered_sentences(100, "Gamma")};
  for (std::size_t k = 0; k <= 5; ++k) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      sb::SynthesisOptions options{.n_changes = k, .min_segment_sentences = 3, .max_segment_sentences = 9};
      const auto out = sb::synthesize_document("problem-1", sources, options, seed);
      ASSERT_EQ(out.borders.size(), k);
      EXPECT_EQ(out.changed, k > 0);
      const auto sentences = sb::source_sentences(out.doc);
      const auto stem = [](const std::string& s) { return s.substr(0, s.find(' ')); };
      std::size_t next = 0;
      for (std::size_t s = 1; s < sentences.size(); ++s) {
        const bool switched = stem(sentences[s]) != stem(sentences[s - 1]);
        const bool is_border = next < k && out.borders[next] == s;
        EXPECT_EQ(switched, is_border) << "k=" << k << " seed=" << seed << " s=" << s;
        if (is_border) ++next;
      }
      for (const auto b : out.borders) {
        EXPECT_GT(b, 0u);
        EXPECT_LT(b, out.doc.sentence_count());
      }
    }
  }
}

TEST(Synthesis, Errors) {
  const std::vector<std::string> one = {numbered_sentences(40)};
  EXPECT_THROW(sb::synthesize_document("problem-1", one, 1, 10, 0), sb::InvalidArgument);
  const std::vector<std::string> same = {numbered_sentences(40), numbered_sentences(40)};
  EXPECT_THROW(sb::synthesize_document("problem-1", same, 1, 10, 0), sb::InvalidArgument);
  const std::vector<std::string> short_sources = {numbered_sentences(10, "A"),
                                                  numbered_sentences(10, "B")};
  EXPECT_THROW(sb::synthesize_document("problem-1", short_sources, 1, 25, 0), sb::InvalidArgument);
  EXPECT_THROW(sb::synthesize_document("problem-1", std::vector<std::string>{}, 0, 1, 0),
               sb::InvalidArgument);
}

TEST(SyntheticAuthors, TextHasRequestedSentenceCount) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto profile = sb::random_author_profile(vocabulary(), seed);
    const auto text = sb::generate_author_text(profile, vocabulary(), 60, seed + 100);
    EXPECT_EQ(sb::make_document("a", text).sentence_count(), 60u) << seed;
  }
}

TEST(SyntheticAuthors, Deterministic) {
  const auto p1 = sb::random_author_profile(vocabulary(), 5);
  const auto p2 = sb::random_author_profile(vocabulary(), 5);
  EXPECT_EQ(p1.function_weights, p2.function_weights);
  EXPECT_EQ(p1.entities, p2.entities);
  EXPECT_EQ(sb::generate_author_text(p1, vocabulary(), 20, 1),
            sb::generate_author_text(p2, vocabulary(), 20, 1));
  EXPECT_NE(sb::generate_author_text(p1, vocabulary(), 20, 1),
            sb::generate_author_text(p1, vocabulary(), 20, 2));
}

TEST(SyntheticAuthors, ProfilesDifferInSentenceLength) {
  const auto mean_words = [](const std::string& text) {
    const auto doc = sb::make_document("a", text);
    return static_cast<double>(doc.token_count()) / static_cast<double>(doc.sentence_count());
  };
  sb::AuthorProfile terse = sb::random_author_profile(vocabulary(), 1);
  sb::AuthorProfile verbose = terse;
  terse.mean_sentence_words = 8;
  verbose.mean_sentence_words = 28;
  EXPECT_LT(mean_words(sb::generate_author_text(terse, vocabulary(), 200, 3)) + 10,
            mean_words(sb::generate_author_text(verbose, vocabulary(), 200, 3)));
}

TEST(SyntheticCorpus, LabelsAndLengths) {
  sb::SyntheticCorpusOptions options;
  options.documents = 20;
  options.authors = 6;
  options.max_changes = 3;
  options.source_sentences = 100;
  const auto corpus = sb::synthesize_corpus(options, vocabulary(), 42);
  ASSERT_EQ(corpus.size(), 20u);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& item = corpus[i];
    EXPECT_EQ(item.doc.id, "problem-" + std::to_string(i + 1));
    EXPECT_EQ(item.changed, !item.borders.empty());
    EXPECT_LE(item.borders.size(), 3u);
    EXPECT_GE(item.doc.sentence_count(), 20u);
    EXPECT_LE(item.doc.sentence_count(), 80u);
    changed += item.changed;
  }
  EXPECT_EQ(changed, 10u);
  const auto again = sb::synthesize_corpus(options, vocabulary(), 42);
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(corpus[i].doc, again[i].doc);
}

TEST(SyntheticCorpus, WriteLoadRoundTrip) {
  sb::SyntheticCorpusOptions options;
  options.documents = 12;
  options.authors = 4;
  options.max_changes = 2;
  options.source_sentences = 80;
  const auto corpus = sb::synthesize_corpus(options, vocabulary(), 7);
  for (const auto format : {sb::BorderFormat::Characters, sb::BorderFormat::Sentences}) {
    TempDir dir;
    sb::write_corpus(dir.path(), corpus, format);
    const auto breach = sb::load_breach_corpus(dir.path(), format);
    const auto change = sb::load_change_corpus(dir.path());
    ASSERT_EQ(breach.size(), corpus.size());
    ASSERT_EQ(change.size(), corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      EXPECT_EQ(breach[i].doc, corpus[i].doc);
      EXPECT_EQ(breach[i].borders, corpus[i].borders);
      EXPECT_EQ(breach[i].changed, corpus[i].changed);
      EXPECT_EQ(change[i].doc, corpus[i].doc);
      EXPECT_EQ(change[i].changed, corpus[i].changed);
    }
  }
}

TEST(SyntheticCorpus, WriterRejectsBadIds) {
  TempDir dir;
  sb::LabeledDocument item;
  item.doc = sb::make_document("essay", "Text.");
  EXPECT_THROW(sb::write_corpus(dir.path(), std::span(&item, 1)), sb::InvalidArgument);
}

TEST(CorpusIo, SerialAndParallelLoadingAgree) {
  sb::SyntheticCorpusOptions options;
  options.documents = 10;
  options.authors = 3;
  options.source_sentences = 60;
  const auto corpus = sb::synthesize_corpus(options, vocabulary(), 3);
  TempDir dir;
  sb::write_corpus(dir.path(), corpus);
  const auto serial = sb::load_breach_corpus(dir.path(), sb::BorderFormat::Characters, {},
                                             sb::Execution::Serial);
  const auto parallel = sb::load_breach_corpus(dir.path(), sb::BorderFormat::Characters, {},
                                               sb::Execution::Parallel);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(serial[i].doc, parallel[i].doc);
    EXPECT_EQ(serial[i].borders, parallel[i].borders);
  }
}

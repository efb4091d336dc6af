#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>

#include "stylebreach/document.hpp"
#include "stylebreach/error.hpp"
#include "stylebreach/preprocess.hpp"
#include "stylebreach/random.hpp"

namespace sb = stylebreach;

namespace {

std::vector<std::string> texts(const sb::Tokenized& t) {
  std::vector<std::string> out;
  for (const auto& tok : t.tokens) out.push_back(tok.text);
  return out;
}

std::vector<std::string> filter(std::initializer_list<std::string> tokens) {
  std::vector<std::string> in(tokens);
  return sb::phase2_filter(in, sb::Lexicon::bundled());
}

}  // namespace

TEST(Phase1, ReplacesUrls) {
  EXPECT_EQ(sb::phase1_normalize("see http://a.example/x now"), "see <URL> now");
  EXPECT_EQ(sb::phase1_normalize("go to www.example.com."), "go to <URL>.");
  EXPECT_EQ(sb::phase1_normalize("(https://x.org/a?b=1)"), "(<URL>)");
}

TEST(Phase1, ReplacesLongNumbersOnly) {
  EXPECT_EQ(sb::phase1_normalize("id 1234567890 ok"), "id <NUM> ok");
  EXPECT_EQ(sb::phase1_normalize("call 555"), "call 555");
  EXPECT_EQ(sb::phase1_normalize("exactly 123456 digits"), "exactly 123456 digits");
  EXPECT_EQ(sb::phase1_normalize("seven 1234567"), "seven <NUM>");
}

TEST(Phase1, LeavesOtherTextUntouched) {
  const std::string text = "Plain prose, with punctuation; and \xE2\x80\x9Cquotes\xE2\x80\x9D.";
  EXPECT_EQ(sb::phase1_normalize(text), text);
}

TEST(Phase1, IsIdempotent) {
  sb::Rng rng(11);
  const std::vector<std::string> pieces = {"word", " ", "http://x.io/p", "12345678", "99", ".",
                                           "www.site.org", "<URL>", "<NUM>", "\n"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = 0; i < 12; ++i) text += pieces[rng.uniform_index(pieces.size())];
    const std::string once = sb::phase1_normalize(text);
    EXPECT_EQ(sb::phase1_normalize(once), once) << text;
  }
}

TEST(Phase1, MappedReplacementsPointBackToSource) {
  const std::string source = "a http://b.c/d e 123456789 f";
  const auto result = sb::phase1_normalize_mapped(source);
  ASSERT_EQ(result.replacements.size(), 2u);
  const auto& url = result.replacements[0];
  EXPECT_EQ(source.substr(url.source_begin, url.source_end - url.source_begin), "http://b.c/d");
  EXPECT_EQ(result.text.substr(url.norm_begin, url.norm_end - url.norm_begin), "<URL>");
  const auto& num = result.replacements[1];
  EXPECT_EQ(source.substr(num.source_begin, num.source_end - num.source_begin), "123456789");
}

TEST(Phase2, Paths) {
  EXPECT_EQ(filter({"/usr/local/bin"}), std::vector<std::string>{"<PATH>"});
  EXPECT_EQ(filter({"C:\\Users\\me"}), std::vector<std::string>{"<PATH>"});
  EXPECT_EQ(filter({"and/or"}), std::vector<std::string>{"and/or"});
}

TEST(Phase2, HyphenatedCompounds) {
  EXPECT_EQ(filter({"state-of-the-art"}), (std::vector<std::string>{"state", "of", "the", "art"}));
  EXPECT_EQ(filter({"xqzv-blorf-the"}), std::vector<std::string>{"<LONG>"});
  EXPECT_EQ(filter({"well-known"}), std::vector<std::string>{"well-known"});
}

TEST(Phase2, FloodsAndLongWords) {
  EXPECT_EQ(filter({"aaaaaaa"}), std::vector<std::string>{"<LONG>"});
  EXPECT_EQ(filter({"aaaa"}), std::vector<std::string>{"aaaa"});
  EXPECT_EQ(filter({"pneumonoultramicroscopicsilicovolcanoconiosis"}), std::vector<std::string>{"<LONG>"});
  EXPECT_EQ(filter({"abcdefghijklmnopqrstuvwx"}), std::vector<std::string>{"abcdefghijklmnopqrstuvwx"});
}

TEST(Phase2, IdempotentAndBoundsLength) {
  sb::Rng rng(5);
  const std::string alphabet = "abcde-/\\";
  const auto& lex = sb::Lexicon::bundled();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> tokens;
    for (int t = 0; t < 4; ++t) {
      std::string tok;
      const std::size_t len = 1 + rng.uniform_index(40);
      for (std::size_t i = 0; i < len; ++i) tok.push_back(alphabet[rng.uniform_index(alphabet.size())]);
      tokens.push_back(tok);
    }
    const auto once = sb::phase2_filter(tokens, lex);
    EXPECT_EQ(sb::phase2_filter(once, lex), once);
    for (const auto& tok : once) {
      if (!sb::is_special_token(tok)) EXPECT_LE(sb::utf8_length(tok), 24u) << tok;
    }
  }
}

TEST(Tokenizer, Examples) {
  const auto t = sb::tokenize("Hi there. Bye!");
  EXPECT_EQ(texts(t), (std::vector<std::string>{"Hi", "there", ".", "Bye", "!"}));
  EXPECT_EQ(t.sentences.size(), 2u);

  const auto empty = sb::tokenize("");
  EXPECT_TRUE(empty.tokens.empty());
  EXPECT_TRUE(empty.sentences.empty());

  EXPECT_EQ(texts(sb::tokenize("Don't stop")), (std::vector<std::string>{"Don't", "stop"}));
}

TEST(Tokenizer, MatchesGoldenFile) {
  std::ifstream in(std::string(STYLEBREACH_TEST_DATA_DIR) + "/tokenizer_golden.json");
  ASSERT_TRUE(in) << "missing golden file";
  const auto golden = nlohmann::json::parse(in);
  ASSERT_FALSE(golden.empty());
  for (const auto& c : golden) {
    const std::string text = c["text"];
    const auto t = sb::tokenize(text);
    EXPECT_EQ(texts(t), c["tokens"].get<std::vector<std::string>>()) << text;
    std::vector<std::vector<std::size_t>> sentences;
    for (const auto& s : t.sentences) sentences.push_back({s.begin, s.end});
    EXPECT_EQ(sentences, c["sentences"].get<std::vector<std::vector<std::size_t>>>()) << text;
  }
}

TEST(Tokenizer, SpansMatchText) {
  const std::string text = "It\xE2\x80\x99s 3.5 o'clock; see <URL> (now)!\n\nNext one.";
  const auto t = sb::tokenize(text);
  for (const auto& tok : t.tokens) {
    EXPECT_EQ(text.substr(tok.begin, tok.end - tok.begin), tok.text);
  }
}

TEST(Tokenizer, SentencesPartitionTokens) {
  sb::Rng rng(3);
  const std::vector<std::string> words = {"The", "cat", "sat", ".", "Dr.", "Who", "?", "!", "\n\n",
                                          "\"Yes", "no\"", "e.g.", "U.S.", "it's"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (int i = 0; i < 25; ++i) text += words[rng.uniform_index(words.size())] + " ";
    const auto t = sb::tokenize(text);
    std::size_t expected = 0;
    for (const auto& s : t.sentences) {
      EXPECT_EQ(s.begin, expected);
      EXPECT_LT(s.begin, s.end);
      expected = s.end;
    }
    EXPECT_EQ(expected, t.tokens.size());
  }
}

TEST(Lexicon, BundledInvariants) {
  const auto& lex = sb::Lexicon::bundled();
  EXPECT_EQ(lex.contractions.size(), sb::kContractionPairCount);
  EXPECT_EQ(lex.max_frequency_word(), "the");
  for (const auto& [w, f] : lex.frequency) {
    ASSERT_GT(f, 0.0) << w;
    ASSERT_LE(f, lex.max_frequency()) << w;
  }
  EXPECT_TRUE(lex.is_contraction("don't"));
  EXPECT_TRUE(lex.common_words.contains("state"));
  EXPECT_FALSE(lex.frequent_words().empty());
  EXPECT_EQ(lex.fingerprint().size(), 16u);
}

TEST(Lexicon, MissingDirectoryIsLoadError) {
  EXPECT_THROW(sb::Lexicon::load("/nonexistent/lexicon"), sb::LoadError);
}

TEST(Lexicon, WrongContractionCountIsParseError) {
  sb::Lexicon lex = sb::Lexicon::bundled();
  lex.contractions.pop_back();
  EXPECT_THROW(lex.finalize(), sb::ParseError);
}

TEST(Document, OffsetsRoundTripThroughReplacements) {
  const std::string source = "Visit http://example.org/page today. Then 123456789 more.";
  const auto doc = sb::make_document("d", source);
  EXPECT_EQ(doc.sentence_count(), 2u);
  const std::size_t end0 = doc.sentence_end_offset(0);
  EXPECT_EQ(doc.text.substr(end0 - 1, 1), ".");
  EXPECT_EQ(source[doc.to_source_offset(end0) - 1], '.');
  EXPECT_EQ(doc.from_source_offset(doc.to_source_offset(end0)), end0);
}

TEST(Document, SliceRebasesTokensAndSentences) {
  const auto doc = sb::make_document("d", "One two. Three four. Five six.");
  const auto part = doc.slice({1, 3});
  EXPECT_EQ(part.sentence_count(), 2u);
  EXPECT_EQ(part.tokens.front().text, "Three");
  EXPECT_EQ(part.tokens.front().begin, 0u);
  EXPECT_EQ(part.sentences.front().begin, 0u);
  EXPECT_EQ(part.text, "Three four. Five six.");
  EXPECT_THROW(doc.slice({2, 5}), sb::InvalidArgument);
}

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "stylebreach/error.hpp"
#include "stylebreach/seg_metrics.hpp"
#include "naive_windows.hpp"

namespace sb = stylebreach;

namespace {

sb::Segmentation random_segmentation(std::mt19937_64& rng, std::size_t n) {
  sb::Segmentation s{n, {}};
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.0, 0.5)(rng));
  for (std::size_t b = 1; b < n; ++b) {
    if (coin(rng)) s.boundaries.push_back(b);
  }
  return s;
}

}  // namespace

TEST(WindowDiff, GoldenCases) {
  std::ifstream in(std::string(STYLEBREACH_TEST_DATA_DIR) + "/segmentation_golden.json");
  ASSERT_TRUE(in);
  const auto golden = nlohmann::json::parse(in);
  for (const auto& c : golden["cases"]) {
    const sb::Segmentation ref{c["n"].get<std::size_t>(), c["ref"].get<std::vector<std::size_t>>()};
    const sb::Segmentation hyp{c["n"].get<std::size_t>(), c["hyp"].get<std::vector<std::size_t>>()};
    EXPECT_EQ(sb::default_window_size(ref), c["k"].get<std::size_t>());
    EXPECT_EQ(sb::window_diff(ref, hyp), c["window_diff"].get<double>());
    const auto pr = sb::win_pr(ref, hyp);
    EXPECT_EQ(pr.true_positives, c["tp"].get<std::size_t>());
    EXPECT_EQ(pr.false_positives, c["fp"].get<std::size_t>());
    EXPECT_EQ(pr.false_negatives, c["fn"].get<std::size_t>());
    EXPECT_EQ(pr.precision, c["win_p"].get<double>());
    EXPECT_EQ(pr.recall, c["win_r"].get<double>());
    EXPECT_EQ(pr.f, c["win_f"].get<double>());
  }
}

TEST(WindowDiff, DerivedCase) {
  const sb::Segmentation ref{10, {5}};
  const sb::Segmentation hyp{10, {}};
  EXPECT_EQ(sb::default_window_size(ref), 2u);
  EXPECT_EQ(sb::window_diff(ref, hyp), 0.25);
  EXPECT_EQ(naive::window_diff(ref, hyp, 2), 0.25);
}

TEST(WindowDiff, IdenticalIsZeroAndEverythingDiffers) {
  const sb::Segmentation s{12, {3, 7}};
  EXPECT_EQ(sb::window_diff(s, s), 0.0);
  const auto pr = sb::win_pr(s, s);
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.recall, 1.0);
  EXPECT_EQ(pr.f, 1.0);

  sb::Segmentation all{12, {}};
  for (std::size_t b = 1; b < 12; ++b) all.boundaries.push_back(b);
  EXPECT_EQ(sb::window_diff(sb::Segmentation{12, {}}, all), 1.0);
}

TEST(WindowDiff, WindowSizeRounding) {
  EXPECT_EQ(sb::default_window_size({10, {5}}), 2u);      // 2.5 -> 2
  EXPECT_EQ(sb::default_window_size({14, {5}}), 4u);      // 3.5 -> 4
  EXPECT_EQ(sb::default_window_size({3, {1, 2}}), 1u);    // 0.5 -> 0 -> floor of 1
  EXPECT_EQ(sb::default_window_size({100, {}}), 50u);
}

TEST(WindowDiff, Errors) {
  EXPECT_THROW(sb::window_diff({10, {5}}, {11, {5}}), sb::InvalidArgument);
  EXPECT_THROW(sb::window_diff({10, {5}}, {10, {}}, 10), sb::InvalidArgument);
  EXPECT_THROW(sb::window_diff({10, {10}}, {10, {}}), sb::InvalidArgument);
  EXPECT_THROW(sb::window_diff({10, {4, 4}}, {10, {}}), sb::InvalidArgument);
  EXPECT_THROW(sb::window_diff({1, {}}, {1, {}}), sb::InvalidArgument);
  EXPECT_THROW(sb::win_pr({2, {1}}, {2, {}}, 2), sb::InvalidArgument);
}

TEST(WindowDiff, MatchesBruteForceOn500RandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 30)(rng);
    const auto ref = random_segmentation(rng, n);
    const auto hyp = random_segmentation(rng, n);
    const std::size_t k = sb::default_window_size(ref);
    if (k >= n) continue;
    EXPECT_EQ(sb::window_diff(ref, hyp), naive::window_diff(ref, hyp, static_cast<long>(k))) << trial;
    const auto fast = sb::win_pr(ref, hyp);
    const auto slow = naive::win_pr(ref, hyp, static_cast<long>(k));
    EXPECT_EQ(fast.true_positives, slow.true_positives) << trial;
    EXPECT_EQ(fast.false_positives, slow.false_positives) << trial;
    EXPECT_EQ(fast.false_negatives, slow.false_negatives) << trial;
    EXPECT_EQ(fast.precision, slow.precision) << trial;
    EXPECT_EQ(fast.recall, slow.recall) << trial;
    EXPECT_EQ(fast.f, slow.f) << trial;
  }
}

TEST(WindowDiff, ExplicitWindowMatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 30)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const auto ref = random_segmentation(rng, n);
    const auto hyp = random_segmentation(rng, n);
    EXPECT_EQ(sb::window_diff(ref, hyp, k), naive::window_diff(ref, hyp, static_cast<long>(k)));
    EXPECT_EQ(sb::win_pr(ref, hyp, k).true_positives, naive::win_pr(ref, hyp, static_cast<long>(k)).true_positives);
  }
}

TEST(WindowDiff, NearMissPenaltyIsBounded) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(6, 30)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const sb::Segmentation ref{n, {b}};
    const std::size_t k = sb::default_window_size(ref);
    if (k >= n) continue;
    for (std::size_t delta = 1; delta < k; ++delta) {
      for (const int sign : {-1, 1}) {
        const long shifted = static_cast<long>(b) + sign * static_cast<long>(delta);
        if (shifted <= 0 || shifted >= static_cast<long>(n)) continue;
        const double exact = sb::window_diff(ref, {n, {b}});
        const double moved = sb::window_diff(ref, {n, {static_cast<std::size_t>(shifted)}});
        EXPECT_LE(moved - exact, 2.0 * static_cast<double>(delta) / static_cast<double>(n - k) + 1e-15);
        EXPECT_EQ(moved, naive::window_diff(ref, {n, {static_cast<std::size_t>(shifted)}}, static_cast<long>(k)));
      }
    }
  }
}

TEST(WinPR, DegenerateDenominators) {
  const auto pr = sb::win_pr({10, {5}}, {10, {}});
  EXPECT_EQ(pr.recall, 0.0);
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.f, 0.0);
  const auto none = sb::win_pr({10, {}}, {10, {}});
  EXPECT_EQ(none.precision, 1.0);
  EXPECT_EQ(none.recall, 1.0);
}

TEST(WinPR, PrecisionAndRecallSwap) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 30)(rng);
    const auto a = random_segmentation(rng, n);
    const auto b = random_segmentation(rng, n);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const auto ab = sb::win_pr(a, b, k);
    const auto ba = sb::win_pr(b, a, k);
    EXPECT_EQ(ab.precision, ba.recall);
    EXPECT_EQ(ab.recall, ba.precision);
  }
}

TEST(Baselines, EqualSpacingExamples) {
  EXPECT_EQ(sb::equal_borders(100, 3).boundaries, (std::vector<std::size_t>{25, 50, 75}));
  EXPECT_TRUE(sb::equal_borders(100, 0).boundaries.empty());
  EXPECT_EQ(sb::equal_borders(10, 1).boundaries, (std::vector<std::size_t>{5}));
  EXPECT_EQ(sb::equal_borders(4, 10).boundaries, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Baselines, ContractsAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 1 + seed % 40;
    const auto rnd = sb::baseline_rnd(n, seed);
    const auto eq = sb::baseline_eq(n, seed);
    EXPECT_LE(rnd.boundaries.size(), 10u);
    EXPECT_LE(eq.boundaries.size(), 10u);
    EXPECT_NO_THROW(rnd.validate());
    EXPECT_NO_THROW(eq.validate());
    EXPECT_EQ(rnd, sb::baseline_rnd(n, seed));
    EXPECT_EQ(eq, sb::baseline_eq(n, seed));
    if (n == 1) {
      EXPECT_TRUE(rnd.boundaries.empty());
      EXPECT_TRUE(eq.boundaries.empty());
    }
  }
}

TEST(Baselines, CountsCoverZeroToTen) {
  std::set<std::size_t> counts;
  for (std::uint64_t seed = 0; seed < 500; ++seed) counts.insert(sb::baseline_rnd(200, seed).boundaries.size());
  EXPECT_EQ(counts.size(), 11u);
}

TEST(EvaluateCorpus, Averages) {
  std::vector<sb::EvalPair> perfect = {{"a", {10, {5}}, {10, {5}}}, {"b", {20, {4, 12}}, {20, {4, 12}}}};
  const auto r = sb::evaluate_corpus(perfect);
  EXPECT_EQ(r.window_diff, 0.0);
  EXPECT_EQ(r.win_f, 1.0);

  std::vector<sb::EvalPair> single = {{"x", {10, {5}}, {10, {6}}}};
  const auto one = sb::evaluate_corpus(single);
  EXPECT_EQ(one.window_diff, sb::window_diff(single[0].ref, single[0].hyp));
  EXPECT_EQ(one.win_p, 0.5);
  EXPECT_EQ(one.win_f, 0.5);

  std::vector<sb::EvalPair> mixed = {perfect[0], single[0]};
  const auto m = sb::evaluate_corpus(mixed);
  EXPECT_EQ(m.window_diff, (0.0 + 0.25) / 2);
  EXPECT_EQ(m.win_f, (1.0 + 0.5) / 2);
  ASSERT_EQ(m.per_document.size(), 2u);
  EXPECT_EQ(m.per_document[1].id, "x");
}

TEST(EvaluateCorpus, SerialEqualsParallel) {
  std::mt19937_64 rng(3);
  std::vector<sb::EvalPair> pairs;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 60)(rng);
    pairs.push_back({std::to_string(i), random_segmentation(rng, n), random_segmentation(rng, n)});
    if (sb::default_window_size(pairs.back().ref) >= n) pairs.pop_back();
  }
  const auto s = sb::evaluate_corpus(pairs, sb::Execution::Serial);
  const auto p = sb::evaluate_corpus(pairs, sb::Execution::Parallel);
  EXPECT_EQ(s.window_diff, p.window_diff);
  EXPECT_EQ(s.win_f, p.win_f);
}

TEST(EvaluateCorpus, ErrorsNameTheDocument) {
  EXPECT_THROW(sb::evaluate_corpus(std::vector<sb::EvalPair>{}), sb::InvalidArgument);
  std::vector<sb::EvalPair> bad = {{"problem-9", {10, {5}}, {12, {5}}}};
  try {
    sb::evaluate_corpus(bad);
    FAIL();
  } catch (const sb::InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("problem-9"), std::string::npos);
  }
}

TEST(EvaluateCorpus, TableAndJson) {
  std::vector<sb::EvalPair> single = {{"x", {10, {5}}, {10, {6}}}};
  const auto r = sb::evaluate_corpus(single);
  const std::vector<std::pair<std::string, sb::EvalReport>> rows = {{"model", r}};
  const auto table = sb::format_report_table(rows);
  EXPECT_NE(table.find("windowDiff"), std::string::npos);
  EXPECT_NE(table.find("winP"), std::string::npos);
  EXPECT_NE(table.find("model"), std::string::npos);
  EXPECT_NE(table.find("0.2500"), std::string::npos);
  const auto j = sb::report_to_json(r, true);
  EXPECT_EQ(j["windowDiff"].get<double>(), 0.25);
  EXPECT_EQ(j["per_document"].size(), 1u);
}

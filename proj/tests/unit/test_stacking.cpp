#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <set>

#include "stylebreach/error.hpp"
#include "stylebreach/stacking.hpp"

namespace sb = stylebreach;

namespace {

const sb::Lexicon& lexicon() { return sb::Lexicon::bundled(); }

const sb::AuthorVocabulary& vocabulary() {
  static const auto v = sb::AuthorVocabulary::from_lexicon(lexicon());
  return v;
}

std::vector<sb::LabeledDocument> corpus(std::size_t n, std::uint64_t seed) {
  sb::SyntheticCorpusOptions options;
  options.documents = n;
  options.authors = 10;
  options.source_sentences = 120;
  return sb::synthesize_corpus(options, vocabulary(), seed);
}

// Reads the document index stored in column 0 and returns its true label.
class OracleModel final : public sb::ProbabilisticModel {
 public:
  explicit OracleModel(std::vector<int> labels) : labels_(std::move(labels)) {}
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override {
    Eigen::VectorXd p(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) p[i] = labels_.at(static_cast<std::size_t>(X(i, 0)));
    return p;
  }
  std::size_t input_dimension() const override { return 1; }
  nlohmann::json to_json() const override { return nullptr; }

 private:
  std::vector<int> labels_;
};

// Group matrices holding only the row's document index.
sb::FeatureTable index_table(std::span<const sb::FeatureGroup> groups, std::size_t first, std::size_t count) {
  sb::FeatureTable table;
  for (const auto g : groups) {
    table.groups.push_back(g);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(count), 1);
    for (std::size_t i = 0; i < count; ++i) X(static_cast<Eigen::Index>(i), 0) = static_cast<double>(first + i);
    table.matrices.push_back(X);
  }
  return table;
}

struct OracleSetup {
  std::vector<sb::LabeledDocument> items;
  std::vector<sb::Document> docs;
  std::vector<int> labels;

  explicit OracleSetup(std::size_t n) : items(corpus(n, 17)) {
    for (const auto& item : items) {
      docs.push_back(item.doc);
      labels.push_back(item.changed ? 1 : 0);
    }
  }
  sb::Labels y(std::size_t first, std::size_t count) const {
    sb::Labels out(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) out[static_cast<Eigen::Index>(i)] = labels[first + i];
    return out;
  }
  sb::ZeroLevelTrainer oracle() const {
    return [labels = labels](sb::FeatureGroup, const sb::LearnerSpec& spec, const Eigen::MatrixXd&, const sb::Labels&,
                             std::uint64_t) {
      sb::TrainedLearner l;
      l.spec = spec;
      l.model = std::make_shared<OracleModel>(labels);
      return l;
    };
  }
};

}  // namespace

TEST(GroupWeights, Examples) {
  EXPECT_EQ(sb::group_weights(std::vector<double>{0.6, 0.6, 0.6, 0.6}), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(sb::group_weights(std::vector<double>{0.8, 0.2, 0, 0}), (std::vector<double>{0.8, 0.2, 0, 0}));
  EXPECT_EQ(sb::group_weights(std::vector<double>{0, 0, 0, 0}), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  EXPECT_THROW(sb::group_weights(std::vector<double>{}), sb::InvalidArgument);
  EXPECT_THROW(sb::group_weights(std::vector<double>{1.5, 0.1}), sb::InvalidArgument);
}

TEST(GroupWeights, NonnegativeAndSumToOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> acc(4);
    for (auto& a : acc) a = u(rng);
    const auto w = sb::group_weights(acc);
    double total = 0.0;
    for (const double x : w) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(HoldoutSplit, StratifiedAndDisjoint) {
  sb::Labels y(40);
  for (Eigen::Index i = 0; i < 40; ++i) y[i] = i < 16 ? 1 : 0;
  const auto [train, hold] = sb::stratified_holdout_split(y, 0.25, 9);
  EXPECT_EQ(train.size() + hold.size(), 40u);
  std::set<std::size_t> seen(train.begin(), train.end());
  for (const auto h : hold) EXPECT_FALSE(seen.contains(h));
  std::size_t hold_pos = 0;
  for (const auto h : hold) hold_pos += y[static_cast<Eigen::Index>(h)];
  EXPECT_EQ(hold_pos, 4u);       // round(0.25 * 16)
  EXPECT_EQ(hold.size(), 10u);   // 4 + round(0.25 * 24)
  EXPECT_EQ(sb::stratified_holdout_split(y, 0.25, 9), sb::stratified_holdout_split(y, 0.25, 9));
}

TEST(HoldoutSplit, OriginsStayTogether) {
  sb::Labels y(30);
  std::vector<std::size_t> origin(30);
  for (std::size_t i = 0; i < 30; ++i) {
    origin[i] = i % 10;
    y[static_cast<Eigen::Index>(i)] = origin[i] < 5 ? 1 : 0;
  }
  const auto [train, hold] = sb::stratified_holdout_split(y, 0.25, 1, origin);
  std::set<std::size_t> train_origins, hold_origins;
  for (const auto r : train) train_origins.insert(origin[r]);
  for (const auto r : hold) hold_origins.insert(origin[r]);
  for (const auto o : hold_origins) EXPECT_FALSE(train_origins.contains(o));
}

TEST(HoldoutSplit, MissingClassIsError) {
  sb::Labels y(20);
  y.setZero();
  y[3] = 1;
  EXPECT_THROW(sb::stratified_holdout_split(y, 0.25, 0), sb::InvalidArgument);
}

TEST(FragmentAugmentation, LabelsFollowBorders) {
  sb::LabeledDocument item;
  std::string text;
  for (int i = 0; i < 16; ++i) text += "Sentence number " + std::to_string(i) + " ends here. ";
  item.doc = sb::make_document("problem-1", text);
  item.has_borders = true;
  item.changed = true;
  item.borders = {6};
  std::vector<std::size_t> origin;
  const auto fragments = sb::fragment_augmentation(std::span(&item, 1), 6, 0, &origin);
  ASSERT_EQ(fragments.size(), 6u);
  EXPECT_EQ(origin, std::vector<std::size_t>(6, 0));
  std::size_t changed = 0;
  for (const auto& f : fragments) {
    changed += f.changed;
    for (const auto b : f.borders) {
      EXPECT_GT(b, 0u);
      EXPECT_LT(b, f.doc.sentence_count());
    }
  }
  // Border 6 lies inside [0,8) and [4,8) only.
  EXPECT_EQ(changed, 2u);

  sb::LabeledDocument unknown = item;
  unknown.has_borders = false;
  unknown.borders.clear();
  EXPECT_TRUE(sb::fragment_augmentation(std::span(&unknown, 1), 2, 0).empty());
}

TEST(Stacking, OracleZeroLevelGivesPerfectHeldOutAccuracy) {
  OracleSetup setup(100);
  const auto groups = sb::default_stack_groups();
  sb::StackingConfig config;
  ASSERT_EQ(config.groups, groups);
  sb::StackHooks hooks{setup.oracle()};
  const auto table = index_table(groups, 0, 75);
  sb::StackReport report;
  const auto model = sb::train_stack_from_table(table, std::span(setup.docs).first(75), setup.y(0, 75), config, 5,
                                                hooks, sb::Execution::Parallel, &report);
  EXPECT_EQ(model.meta_dimension(), groups.size() + 1);
  EXPECT_EQ(model.meta.input_dimension(), 8u);
  for (const auto& g : report.groups) {
    EXPECT_DOUBLE_EQ(g.standalone_accuracy, 1.0);
    for (const double w : g.weights) EXPECT_DOUBLE_EQ(w, 0.25);
  }
  const auto test_table = index_table(groups, 75, 25);
  const auto test_docs = std::span(setup.docs).subspan(75);
  const Eigen::VectorXd p = sb::predict_from_table(model, test_table, model.branch.predict(test_docs));
  EXPECT_DOUBLE_EQ(sb::accuracy(p, setup.y(75, 25)), 1.0);
}

TEST(Stacking, HoldoutNeverLeaksIntoZeroLevelTraining) {
  OracleSetup setup(60);
  const auto groups = sb::default_stack_groups();
  std::mutex mutex;
  std::set<std::size_t> partial_rows;
  sb::StackHooks hooks;
  const auto oracle = setup.oracle();
  hooks.train_zero_level = [&](sb::FeatureGroup g, const sb::LearnerSpec& spec, const Eigen::MatrixXd& X,
                               const sb::Labels& y, std::uint64_t seed) {
    if (X.rows() < 60) {
      std::lock_guard lock(mutex);
      for (Eigen::Index i = 0; i < X.rows(); ++i) partial_rows.insert(static_cast<std::size_t>(X(i, 0)));
    }
    return oracle(g, spec, X, y, seed);
  };
  sb::StackReport report;
  sb::train_stack_from_table(index_table(groups, 0, 60), setup.docs, setup.y(0, 60), {}, 3, hooks,
                             sb::Execution::Serial, &report);
  EXPECT_EQ(partial_rows, std::set<std::size_t>(report.train_rows.begin(), report.train_rows.end()));
  for (const auto h : report.holdout_rows) EXPECT_FALSE(partial_rows.contains(h)) << h;
  EXPECT_EQ(report.train_rows.size() + report.holdout_rows.size(), 60u);
}

TEST(Stacking, DisablingAGroupRemovesOneMetaDimension) {
  OracleSetup setup(60);
  sb::StackingConfig config;
  config.groups.erase(config.groups.begin() + 2);
  const auto model = sb::train_stack_from_table(index_table(config.groups, 0, 60), setup.docs, setup.y(0, 60), config,
                                                3, {setup.oracle()}, sb::Execution::Serial);
  EXPECT_EQ(model.meta.input_dimension(), sb::default_stack_groups().size());
  EXPECT_EQ(model.groups.size(), sb::default_stack_groups().size() - 1);

  config.pair_meta_features = true;
  const auto paired = sb::train_stack_from_table(index_table(config.groups, 0, 60), setup.docs, setup.y(0, 60),
                                                 config, 3, {setup.oracle()}, sb::Execution::Serial);
  EXPECT_EQ(paired.meta.input_dimension(), 2 * config.groups.size() + 1);
}

TEST(Stacking, ConstantGroupStillTrains) {
  OracleSetup setup(60);
  sb::StackingConfig config;
  config.groups = {sb::FeatureGroup::Contractions, sb::FeatureGroup::Lexical};
  sb::FeatureTable table;
  table.groups = config.groups;
  table.matrices.push_back(Eigen::MatrixXd::Zero(60, 3));
  Eigen::MatrixXd informative(60, 2);
  for (Eigen::Index i = 0; i < 60; ++i) {
    informative(i, 0) = setup.labels[static_cast<std::size_t>(i)] + 0.1 * static_cast<double>(i % 7);
    informative(i, 1) = static_cast<double>(i % 5);
  }
  table.matrices.push_back(informative);
  sb::StackReport report;
  const auto model = sb::train_stack_from_table(table, setup.docs, setup.y(0, 60), config, 8, {},
                                                sb::Execution::Parallel, &report);
  const Eigen::MatrixXd M = sb::meta_features(model, table, model.branch.predict(setup.docs));
  EXPECT_DOUBLE_EQ(M.col(0).maxCoeff(), M.col(0).minCoeff());
  const Eigen::VectorXd p = sb::predict_from_table(model, table, model.branch.predict(setup.docs));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    EXPECT_GE(p[i], 0.0);
    EXPECT_LE(p[i], 1.0);
  }
  EXPECT_GE(report.groups[1].standalone_accuracy, 0.9);
}

TEST(Stacking, TooFewDocumentsIsError) {
  EXPECT_THROW(sb::train_stack(corpus(20, 1), lexicon(), {}, 0), sb::InvalidArgument);
}

class TrainedStack : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    items_ = new std::vector<sb::LabeledDocument>(corpus(60, 23));
    model_ = std::make_shared<sb::StackedModel>(sb::train_stack(*items_, lexicon(), {}, 11, {},
                                                                sb::Execution::Parallel, &report_));
  }
  static void TearDownTestSuite() {
    delete items_;
    model_.reset();
  }
  static std::vector<sb::LabeledDocument>* items_;
  static std::shared_ptr<sb::StackedModel> model_;
  static sb::StackReport report_;
};

std::vector<sb::LabeledDocument>* TrainedStack::items_ = nullptr;
std::shared_ptr<sb::StackedModel> TrainedStack::model_;
sb::StackReport TrainedStack::report_;

TEST_F(TrainedStack, ReportShape) {
  EXPECT_EQ(report_.groups.size(), 7u);
  for (const auto& g : report_.groups) {
    EXPECT_EQ(g.accuracies.size(), 4u);
    EXPECT_EQ(g.meta_coefficients.size(), 1u);
    double total = 0.0;
    for (const double w : g.weights) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_EQ(model_->meta.input_dimension(), 8u);
  EXPECT_EQ(report_.holdout_rows.size(), 16u);  // round(0.25 * 30) per class
}

TEST_F(TrainedStack, DeterministicProbabilities) {
  const sb::ChangeDetector detector(model_, lexicon());
  const auto& doc = (*items_)[0].doc;
  const double p = detector.probability(doc);
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_EQ(p, detector.probability(doc));
  std::vector<sb::Document> docs;
  for (std::size_t i = 0; i < 10; ++i) docs.push_back((*items_)[i].doc);
  const auto serial = detector.probabilities(docs, sb::Execution::Serial);
  const auto parallel = detector.probabilities(docs, sb::Execution::Parallel);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial[0], p);
}

TEST_F(TrainedStack, EmptyDocumentIsError) {
  const sb::ChangeDetector detector(model_, lexicon());
  EXPECT_THROW(detector.probability(sb::make_document("empty", "")), sb::InvalidArgument);
}

TEST_F(TrainedStack, SaveLoadRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "stylebreach-test-model.cbor";
  sb::save_model(path, *model_);
  const auto loaded = std::make_shared<sb::StackedModel>(sb::load_model(path));
  std::filesystem::remove(path);
  EXPECT_EQ(sb::model_to_json(*loaded), sb::model_to_json(*model_));
  const sb::ChangeDetector a(model_, lexicon());
  const sb::ChangeDetector b(loaded, lexicon());
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(a.probability((*items_)[i].doc), b.probability((*items_)[i].doc));
  }
}

TEST_F(TrainedStack, RejectsForeignContainers) {
  auto j = sb::model_to_json(*model_);
  j["version"] = 2;
  EXPECT_THROW(sb::model_from_json(j), sb::ModelFormatError);
  j = sb::model_to_json(*model_);
  j["format"] = "something-else";
  EXPECT_THROW(sb::model_from_json(j), sb::ModelFormatError);
  const auto path = std::filesystem::temp_directory_path() / "stylebreach-test-not-a-model";
  { std::ofstream(path) << "plain text"; }
  EXPECT_THROW(sb::load_model(path), sb::ModelFormatError);
  std::filesystem::remove(path);
  EXPECT_THROW(sb::load_model("/nonexistent/model.cbor"), sb::LoadError);
}

TEST_F(TrainedStack, LexiconMismatchIsRejected) {
  auto copy = std::make_shared<sb::StackedModel>(*model_);
  copy->lexicon_fingerprint = "0000000000000000";
  EXPECT_THROW(sb::ChangeDetector(copy, lexicon()), sb::ModelFormatError);
}

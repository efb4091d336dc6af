#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "stylebreach/breach_locator.hpp"
#include "stylebreach/corpus_io.hpp"
#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"
#include "stylebreach/seg_metrics.hpp"
#include "stylebreach/stacking.hpp"

namespace stylebreach::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kRandomBaselineStream = 1;
constexpr std::uint64_t kEqualBaselineStream = 2;

struct Common {
  int jobs = 0;
  std::string lexicon_dir;
  bool quiet = false;
};

class Context {
 public:
  explicit Context(const Common& common) : common_(common) {}

  Execution exec() const {
    if (common_.jobs > 0) set_thread_count(common_.jobs);
    return common_.jobs == 1 ? Execution::Serial : Execution::Parallel;
  }

  const Lexicon& lexicon() {
    if (common_.lexicon_dir.empty()) return Lexicon::bundled();
    if (!owned_) owned_ = Lexicon::load(common_.lexicon_dir);
    return *owned_;
  }

 private:
  const Common& common_;
  std::optional<Lexicon> owned_;
};

struct Seed {
  std::uint64_t value = 0;
  CLI::Option* option = nullptr;

  void add_to(CLI::App* cmd) { option = cmd->add_option("--seed", value, "Random seed (printed when omitted)"); }

  std::uint64_t resolve() {
    if (option->count() == 0) {
      std::random_device device;
      value = (static_cast<std::uint64_t>(device()) << 32) ^ device();
      std::cerr << "seed: " << value << "\n";
    }
    return value;
  }
};

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + tmp.string());
    out << content;
    if (!out) throw LoadError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<Document> load_documents(const fs::path& dir, const PreprocessLimits& limits, Execution exec) {
  const auto problems = list_problems(dir);
  if (problems.empty()) throw LoadError("no problem-*.txt files in " + dir.string());
  std::vector<Document> docs(problems.size());
  for_each_index(problems.size(), exec, [&](std::size_t i) {
    docs[i] = make_document(problems[i].id, read_text_file(problems[i].text), limits);
  });
  return docs;
}

std::shared_ptr<const StackedModel> open_model(const std::string& path) {
  return std::make_shared<const StackedModel>(load_model(path));
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string corpus;
  std::string out;
  std::string report;
  std::string idf_docs;
  std::vector<std::string> groups;
  double holdout = 0.25;
  bool transductive_idf = false;
  bool fragment_augmentation = false;
  std::size_t fragments_per_document = 2;
  bool pair_meta = false;
  Seed seed;
};

std::string train_table(const StackReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-36s  %11s  %8s\n", "Representation", "Coefficient", "Accuracy");
  out << line;
  for (const auto& g : report.groups) {
    const double coef = g.meta_coefficients.empty() ? 0.0 : g.meta_coefficients.back();
    std::snprintf(line, sizeof line, "%-36s  %11.2f  %8.1f\n", std::string(group_display_name(g.group)).c_str(), coef,
                  100.0 * g.standalone_accuracy);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-36s  %11.2f  %8.1f\n", "GBM with TF-IDF", report.branch_coefficient,
                100.0 * report.branch_accuracy);
  out << line;
  std::snprintf(line, sizeof line, "%-36s  %11.2f\n", "(intercept)", report.meta_intercept);
  out << line;
  std::snprintf(line, sizeof line, "%-36s  %11s  %8.1f\n", "Stacking (meta fit rows)", "",
                100.0 * report.meta_holdout_accuracy);
  out << line;
  return out.str();
}

json train_report_json(const StackReport& report, std::uint64_t seed, const std::string& fingerprint) {
  json groups = json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"group", group_id(g.group)},
                      {"name", group_display_name(g.group)},
                      {"accuracy", g.standalone_accuracy},
                      {"coefficients", g.meta_coefficients},
                      {"learner_accuracies", g.accuracies},
                      {"learner_weights", g.weights}});
  }
  return {{"seed", seed},
          {"model_fingerprint", fingerprint},
          {"train_rows", report.train_rows.size()},
          {"holdout_rows", report.holdout_rows.size()},
          {"groups", groups},
          {"branch", {{"name", "GBM with TF-IDF"}, {"accuracy", report.branch_accuracy},
                      {"coefficient", report.branch_coefficient}}},
          {"meta_intercept", report.meta_intercept},
          {"meta_fit_accuracy", report.meta_holdout_accuracy}};
}

int run_train(Context& ctx, TrainOptions& opt) {
  const auto exec = ctx.exec();
  const std::uint64_t seed = opt.seed.resolve();
  StackingConfig config;
  if (!opt.groups.empty()) {
    config.groups.clear();
    for (const auto& name : opt.groups) config.groups.push_back(parse_feature_group(name));
  }
  config.holdout_fraction = opt.holdout;
  config.fragment_augmentation = opt.fragment_augmentation;
  config.fragments_per_document = opt.fragments_per_document;
  config.pair_meta_features = opt.pair_meta;
  config.branch.transductive_idf = opt.transductive_idf || !opt.idf_docs.empty();

  const auto corpus = load_change_corpus(opt.corpus, config.features.limits, exec);
  std::vector<Document> extra;
  if (!opt.idf_docs.empty()) extra = load_documents(opt.idf_docs, config.features.limits, exec);
  if (opt.transductive_idf && extra.empty()) {
    spdlog::warn("--transductive-idf without --idf-docs: IDF uses the training documents only");
  }
  spdlog::info("training on {} documents ({} groups)", corpus.size(), config.groups.size());

  StackReport report;
  const StackedModel model = train_stack(corpus, ctx.lexicon(), config, seed, {}, exec, &report, extra);

  const fs::path out(opt.out);
  const fs::path tmp = out.string() + ".tmp";
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_model(tmp, model);
  fs::rename(tmp, out);
  const std::string fingerprint = fnv1a_hex(read_text_file(out));

  const fs::path report_path = opt.report.empty() ? fs::path(out.string() + ".report.json") : fs::path(opt.report);
  write_atomically(report_path, train_report_json(report, seed, fingerprint).dump(2) + "\n");

  std::cout << train_table(report);
  std::cout << "model: " << out.string() << " (fingerprint " << fingerprint << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
  std::string model;
  std::string input;
  std::string out;
};

int run_predict(Context& ctx, PredictOptions& opt) {
  const auto exec = ctx.exec();
  const auto model = open_model(opt.model);
  const ChangeDetector detector(model, ctx.lexicon());
  const auto docs = load_documents(opt.input, model->config.features.limits, exec);
  const Eigen::VectorXd p = detector.probabilities(docs, exec);

  std::ostringstream lines;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const double pi = p[static_cast<Eigen::Index>(i)];
    changed += pi > 0.5;
    lines << json{{"id", docs[i].id}, {"p_changed", pi}, {"changed", pi > 0.5}}.dump() << "\n";
  }
  if (opt.out.empty()) {
    std::cout << lines.str();
  } else {
    write_atomically(opt.out, lines.str());
  }
  std::cerr << "documents " << docs.size() << ", predicted changed " << changed << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// locate

struct LocateOptions {
  std::string model;
  std::string input;
  std::string out;
  std::string format = "chars";
  LocatorConfig locator;
};

int run_locate(Context& ctx, LocateOptions& opt) {
  const auto exec = ctx.exec();
  const BorderFormat format = parse_border_format(opt.format);
  opt.locator.validate();
  const auto model = open_model(opt.model);
  const ChangeDetector detector(model, ctx.lexicon());
  const auto docs = load_documents(opt.input, model->config.features.limits, exec);
  const auto found = locate_corpus(docs, span_detector(detector), opt.locator, exec);

  fs::create_directories(opt.out);
  for_each_index(docs.size(), exec, [&](std::size_t i) {
    write_atomically(fs::path(opt.out) / (docs[i].id + ".truth"), breaches_to_json(docs[i], found[i], format).dump());
  });

  std::size_t total = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    total += found[i].borders.size();
    json line = breaches_to_json(docs[i], found[i], format);
    line["id"] = docs[i].id;
    line["sentences"] = docs[i].sentences.size();
    line["detector_calls"] = found[i].detector_calls;
    std::cout << line.dump() << "\n";
  }
  std::fprintf(stderr, "documents %zu, borders %zu, mean per document %.3f\n", docs.size(), total,
               static_cast<double>(total) / static_cast<double>(docs.size()));
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate / baseline

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) out += (out.empty() ? "" : ", ") + item;
  return out;
}

std::uint64_t baseline_seed(std::uint64_t seed, std::uint64_t stream, std::size_t index) {
  return mix_seed(mix_seed(seed, stream), index);
}

std::vector<std::size_t> read_hypothesis_borders(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("borders") || !j["borders"].is_array()) {
    throw ParseError(path.string() + ": expected {\"borders\": [...]}");
  }
  std::vector<std::size_t> borders;
  for (const auto& b : j["borders"]) {
    if (!b.is_number_integer() || b.get<long long>() < 0) throw ParseError(path.string() + ": bad border " + b.dump());
    borders.push_back(b.get<std::size_t>());
  }
  return borders;
}

struct EvaluateOptions {
  std::string reference;
  std::string hypothesis;
  std::string out;
  std::string format = "chars";
  std::string name = "model";
  bool with_baselines = false;
  bool verbose = false;
  Seed seed;
};

int run_evaluate(Context& ctx, EvaluateOptions& opt) {
  const auto exec = ctx.exec();
  const BorderFormat format = parse_border_format(opt.format);
  const auto reference = load_breach_corpus(opt.reference, format, {}, exec);
  if (reference.empty()) throw LoadError("no reference documents in " + opt.reference);

  std::set<std::string> hyp_ids;
  if (!fs::is_directory(opt.hypothesis)) throw LoadError("not a directory: " + opt.hypothesis);
  static const std::regex truth_name(R"(problem-.+\.truth)");
  for (const auto& entry : fs::directory_iterator(opt.hypothesis)) {
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, truth_name)) hyp_ids.insert(entry.path().stem().string());
  }
  std::vector<std::string> missing;
  std::set<std::string> ref_ids;
  for (const auto& r : reference) {
    ref_ids.insert(r.doc.id);
    if (!hyp_ids.contains(r.doc.id)) missing.push_back(r.doc.id);
  }
  std::vector<std::string> unexpected;
  for (const auto& id : hyp_ids) {
    if (!ref_ids.contains(id)) unexpected.push_back(id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    std::string message = "reference and hypothesis ids differ;";
    if (!missing.empty()) message += " missing hypotheses: " + join(missing) + ";";
    if (!unexpected.empty()) message += " no reference for: " + join(unexpected) + ";";
    message.pop_back();
    throw InvalidArgument(message);
  }

  const std::uint64_t seed = opt.with_baselines ? opt.seed.resolve() : 0;
  std::vector<EvalPair> model_pairs, rnd_pairs, eq_pairs;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& r = reference[i];
    const std::size_t n = r.doc.sentences.size();
    if (n < 2) {
      spdlog::warn("{}: fewer than two sentences, not scored", r.doc.id);
      continue;
    }
    const Segmentation ref{n, r.borders};
    const auto raw = read_hypothesis_borders(fs::path(opt.hypothesis) / (r.doc.id + ".truth"));
    Segmentation hyp{n, format == BorderFormat::Sentences ? raw : snap_character_borders(r.doc, raw)};
    try {
      hyp.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(r.doc.id + " hypothesis: " + e.what());
    }
    model_pairs.push_back({r.doc.id, ref, hyp});
    if (opt.with_baselines) {
      rnd_pairs.push_back({r.doc.id, ref, baseline_rnd(n, baseline_seed(seed, kRandomBaselineStream, i))});
      eq_pairs.push_back({r.doc.id, ref, baseline_eq(n, baseline_seed(seed, kEqualBaselineStream, i))});
    }
  }
  if (model_pairs.empty()) throw InvalidArgument("no reference document has two or more sentences");

  std::vector<std::pair<std::string, EvalReport>> rows;
  if (opt.with_baselines) {
    rows.emplace_back("BASELINE-rnd", evaluate_corpus(rnd_pairs, exec));
    rows.emplace_back("BASELINE-eq", evaluate_corpus(eq_pairs, exec));
  }
  rows.emplace_back(opt.name, evaluate_corpus(model_pairs, exec));

  std::cout << format_report_table(rows);
  if (opt.verbose) {
    for (const auto& [name, r] : rows) std::printf("%s: winF of mean winP/winR %.4f\n", name.c_str(), r.win_f_of_means);
  }
  json j = {{"documents", model_pairs.size()}, {"rows", json::array()}};
  if (opt.with_baselines) j["seed"] = seed;
  for (const auto& [name, r] : rows) {
    json row = report_to_json(r, opt.verbose);
    row["name"] = name;
    j["rows"].push_back(row);
  }
  if (!opt.out.empty()) write_atomically(opt.out, j.dump(2) + "\n");
  return 0;
}

struct BaselineOptions {
  std::string input;
  std::string out;
  std::string kind = "rnd";
  std::string format = "chars";
  Seed seed;
};

int run_baseline(Context& ctx, BaselineOptions& opt) {
  const auto exec = ctx.exec();
  const BorderFormat format = parse_border_format(opt.format);
  const bool random = opt.kind == "rnd";
  const std::uint64_t seed = opt.seed.resolve();
  const auto docs = load_documents(opt.input, {}, exec);
  fs::create_directories(opt.out);
  for_each_index(docs.size(), exec, [&](std::size_t i) {
    const std::size_t n = docs[i].sentences.size();
    const Segmentation s = random ? baseline_rnd(n, baseline_seed(seed, kRandomBaselineStream, i))
                                  : baseline_eq(n, baseline_seed(seed, kEqualBaselineStream, i));
    const BreachSet b{docs[i].id, s.boundaries, 0, 0};
    write_atomically(fs::path(opt.out) / (docs[i].id + ".truth"), breaches_to_json(docs[i], b, format).dump());
  });
  std::cerr << "wrote " << docs.size() << " BASELINE-" << opt.kind << " border files to " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synthesize

struct SynthesizeOptions {
  std::string out;
  std::string sources;
  std::string format = "chars";
  SyntheticCorpusOptions corpus;
  Seed seed;
};

std::vector<LabeledDocument> synthesize_from_sources(const SynthesizeOptions& opt, std::uint64_t seed) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.sources)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw LoadError("no .txt source files in " + opt.sources);
  std::vector<std::string> texts;
  for (const auto& f : files) texts.push_back(read_text_file(f));

  const auto& c = opt.corpus;
  const auto n_changed = static_cast<std::size_t>(std::llround(c.changed_fraction * static_cast<double>(c.documents)));
  std::vector<bool> changed(c.documents, false);
  std::fill_n(changed.begin(), std::min(n_changed, c.documents), true);
  Rng rng(mix_seed(seed, 0));
  rng.shuffle(changed);

  std::vector<LabeledDocument> out;
  for (std::size_t i = 0; i < c.documents; ++i) {
    Rng pick(mix_seed(seed, 2 * i + 1));
    const std::size_t k = changed[i] ? pick.uniform_int(c.min_changes, c.max_changes) : 0;
    SynthesisOptions so{k, c.min_segment_sentences, c.max_segment_sentences};
    out.push_back(synthesize_document("problem-" + std::to_string(c.first_problem + i), texts, so,
                                      mix_seed(seed, 2 * i + 2)));
  }
  return out;
}

int run_synthesize(Context& ctx, SynthesizeOptions& opt) {
  const BorderFormat format = parse_border_format(opt.format);
  const std::uint64_t seed = opt.seed.resolve();
  std::vector<LabeledDocument> corpus;
  if (opt.sources.empty()) {
    const auto vocabulary = AuthorVocabulary::from_lexicon(ctx.lexicon());
    corpus = synthesize_corpus(opt.corpus, vocabulary, seed);
  } else {
    corpus = synthesize_from_sources(opt, seed);
  }
  write_corpus(opt.out, corpus, format);
  const auto changed = std::count_if(corpus.begin(), corpus.end(), [](const auto& d) { return d.changed; });
  std::cerr << "wrote " << corpus.size() << " documents (" << changed << " with style changes) to " << opt.out << "\n";
  return 0;
}

std::vector<char*> to_argv(std::vector<std::string>& args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return argv;
}

}  // namespace

int run(const std::vector<std::string>& args_in) {
  CLI::App app{"Style change detection and style breach localization"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value config file; [command] sections hold command options");

  Common common;
  app.add_option("-j,--jobs", common.jobs, "Worker threads (0: all cores, 1: serial)")->capture_default_str();
  app.add_option("--lexicon", common.lexicon_dir, "Lexicon directory (default: $STYLEBREACH_LEXICON_DIR or bundled)");
  app.add_flag("-q,--quiet", common.quiet, "Only log errors");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train the stacked change detector on a labeled corpus");
  train_cmd->add_option("--corpus", train.corpus, "Directory of problem-<N>.txt/.truth pairs")
      ->required()
      ->check(CLI::ExistingDirectory);
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--report", train.report, "Training report JSON (default: <out>.report.json)");
  train_cmd->add_option("--holdout", train.holdout, "Fraction of documents held out to fit the meta-learner")
      ->capture_default_str()
      ->check(CLI::Range(0.05, 0.95));
  train_cmd->add_option("--groups", train.groups, "Feature groups to stack (default: the seven standard groups)")
      ->delimiter(',');
  train_cmd->add_flag("--transductive-idf", train.transductive_idf, "Compute IDF over training and --idf-docs texts");
  train_cmd->add_option("--idf-docs", train.idf_docs, "Unlabeled documents that contribute to IDF only")
      ->check(CLI::ExistingDirectory);
  train_cmd->add_flag("--fragment-augmentation", train.fragment_augmentation,
                      "Add half/quarter fragments of each document as extra training rows");
  train_cmd->add_option("--fragments-per-document", train.fragments_per_document,
                        "Fragments drawn per document with --fragment-augmentation")
      ->capture_default_str();
  train_cmd->add_flag("--pair-meta-features", train.pair_meta, "Feed [1-p, p] per group to the meta-learner");
  train.seed.add_to(train_cmd);

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Print P(style change) per document as JSON lines");
  predict_cmd->add_option("--model", predict.model, "Trained model file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--input", predict.input, "Directory of problem-<N>.txt files")
      ->required()
      ->check(CLI::ExistingDirectory);
  predict_cmd->add_option("--out", predict.out, "JSON-lines output (default: stdout); changed = p > 0.5");

  LocateOptions locate;
  auto* locate_cmd = app.add_subcommand("locate", "Find style breach borders by recursive bisection");
  locate_cmd->add_option("--model", locate.model, "Trained model file")->required()->check(CLI::ExistingFile);
  locate_cmd->add_option("--input", locate.input, "Directory of problem-<N>.txt files")
      ->required()
      ->check(CLI::ExistingDirectory);
  locate_cmd->add_option("--out", locate.out, "Directory for problem-<N>.truth border files")->required();
  locate_cmd->add_option("--threshold", locate.locator.threshold, "P(changed) needed to keep splitting a fragment")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  locate_cmd->add_option("--min-sentences", locate.locator.min_sentences,
                         "Fragments shorter than this are not split; their middle is the border")
      ->capture_default_str();
  locate_cmd->add_flag("--paper-exact", locate.locator.emit_untested_halves,
                       "Emit the middle of short halves without scoring them");
  locate_cmd->add_option("--border-format", locate.format, "Border units: chars (code points) or sentences")
      ->capture_default_str();

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score hypothesis borders with WindowDiff and WinPR");
  evaluate_cmd->add_option("--reference", evaluate.reference, "Directory of problem-<N>.txt/.truth pairs")
      ->required()
      ->check(CLI::ExistingDirectory);
  evaluate_cmd->add_option("--hypothesis", evaluate.hypothesis, "Directory of problem-<N>.truth files")
      ->required()
      ->check(CLI::ExistingDirectory);
  evaluate_cmd->add_option("--out", evaluate.out, "JSON report file");
  evaluate_cmd->add_option("--border-format", evaluate.format, "Border units: chars (code points) or sentences")
      ->capture_default_str();
  evaluate_cmd->add_option("--name", evaluate.name, "Row name for the hypothesis")->capture_default_str();
  evaluate_cmd->add_flag("--with-baselines", evaluate.with_baselines,
                         "Add BASELINE-rnd and BASELINE-eq rows (0-10 random or equally spaced borders)");
  evaluate_cmd->add_flag("-v,--verbose", evaluate.verbose, "Per-document scores and winF of the mean winP/winR");
  evaluate.seed.add_to(evaluate_cmd);

  BaselineOptions baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Write random or equally spaced border files (0-10 borders)");
  baseline_cmd->add_option("--input", baseline.input, "Directory of problem-<N>.txt files")
      ->required()
      ->check(CLI::ExistingDirectory);
  baseline_cmd->add_option("--out", baseline.out, "Directory for problem-<N>.truth border files")->required();
  baseline_cmd->add_option("--kind", baseline.kind, "rnd: random positions; eq: equal segments")
      ->capture_default_str()
      ->check(CLI::IsMember({"rnd", "eq"}));
  baseline_cmd->add_option("--border-format", baseline.format, "Border units: chars (code points) or sentences")
      ->capture_default_str();
  baseline.seed.add_to(baseline_cmd);

  SynthesizeOptions synth;
  auto* synth_cmd = app.add_subcommand("synthesize", "Write a corpus of single- and multi-author documents");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--sources", synth.sources, "Directory of .txt source texts (default: generated authors)")
      ->check(CLI::ExistingDirectory);
  synth_cmd->add_option("--documents", synth.corpus.documents, "Number of documents")->capture_default_str();
  synth_cmd->add_option("--changed-fraction", synth.corpus.changed_fraction, "Share of multi-author documents")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--min-changes", synth.corpus.min_changes, "Fewest borders in a changed document")
      ->capture_default_str();
  synth_cmd->add_option("--max-changes", synth.corpus.max_changes, "Most borders in a changed document")
      ->capture_default_str();
  synth_cmd->add_option("--min-segment", synth.corpus.min_segment_sentences, "Shortest author block (sentences)")
      ->capture_default_str();
  synth_cmd->add_option("--max-segment", synth.corpus.max_segment_sentences, "Longest author block (sentences)")
      ->capture_default_str();
  synth_cmd->add_option("--authors", synth.corpus.authors, "Generated authors")->capture_default_str();
  synth_cmd->add_option("--source-sentences", synth.corpus.source_sentences, "Sentences generated per author")
      ->capture_default_str();
  synth_cmd->add_option("--first-problem", synth.corpus.first_problem, "Number of the first problem file")
      ->capture_default_str();
  synth_cmd->add_option("--border-format", synth.format, "Truth border units: chars (code points) or sentences")
      ->capture_default_str();
  synth.seed.add_to(synth_cmd);

  std::vector<std::string> args = args_in;
  auto argv = to_argv(args);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  spdlog::set_level(common.quiet ? spdlog::level::err : spdlog::level::info);
  Context ctx(common);
  try {
    if (*train_cmd) return run_train(ctx, train);
    if (*predict_cmd) return run_predict(ctx, predict);
    if (*locate_cmd) return run_locate(ctx, locate);
    if (*evaluate_cmd) return run_evaluate(ctx, evaluate);
    if (*baseline_cmd) return run_baseline(ctx, baseline);
    if (*synth_cmd) return run_synthesize(ctx, synth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace stylebreach::cli

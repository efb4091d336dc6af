#pragma once

// Segmentation agreement over sentence units: WindowDiff, WinPR and the two
// random border baselines.
//
// A boundary b in (0, n_units) separates unit b-1 from unit b (0-based), so
// it lies strictly between 1-based units i and i+k exactly when i <= b < i+k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylebreach/parallel.hpp"

namespace stylebreach {

struct Segmentation {
  std::size_t n_units = 0;
  std::vector<std::size_t> boundaries;  // strictly increasing, each in (0, n_units)

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
  bool operator==(const Segmentation&) const = default;
};

/// max(1, round(N / (2 (|ref| + 1)))), ties to even.
std::size_t default_window_size(const Segmentation& ref);

/// Throws InvalidArgument on mismatched unit counts, N < 2 or N <= k.
double window_diff(const Segmentation& ref, const Segmentation& hyp, std::optional<std::size_t> k = std::nullopt);

struct WinPR {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

/// Windows i in [1-k, N-1]; degenerate denominators give 1.
WinPR win_pr(const Segmentation& ref, const Segmentation& hyp, std::optional<std::size_t> k = std::nullopt);

/// 0..10 borders (capped at N-1) at random distinct positions.
Segmentation baseline_rnd(std::size_t n_units, std::uint64_t seed);
/// 0..10 borders (capped at N-1), equally spaced.
Segmentation baseline_eq(std::size_t n_units, std::uint64_t seed);
/// m borders at the units closest to j N / (m + 1), j = 1..m.
Segmentation equal_borders(std::size_t n_units, std::size_t m);

struct EvalPair {
  std::string id;
  Segmentation ref;
  Segmentation hyp;
};

struct DocumentScores {
  std::string id;
  double window_diff = 0.0;
  double win_p = 0.0;
  double win_r = 0.0;
  double win_f = 0.0;
};

struct EvalReport {
  double window_diff = 0.0;
  double win_p = 0.0;
  double win_r = 0.0;
  double win_f = 0.0;                // mean of per-document harmonic means
  double win_f_of_means = 0.0;       // harmonic mean of win_p and win_r
  std::vector<DocumentScores> per_document;
};

/// Per-document metrics averaged arithmetically. Throws InvalidArgument on
/// an empty input or an invalid pair (the message names the document).
EvalReport evaluate_corpus(std::span<const EvalPair> pairs, Execution exec = Execution::Parallel);

nlohmann::json report_to_json(const EvalReport& report, bool per_document = false);

/// Aligned plain-text table, one row per named report, columns
/// windowDiff winP winR winF.
std::string format_report_table(std::span<const std::pair<std::string, EvalReport>> rows);

}  // namespace stylebreach

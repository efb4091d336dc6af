#include "stylebreach/seg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
namespace {

// prefix[i] = number of boundaries b < i, for i in [0, N].
std::vector<std::size_t> boundary_prefix(const Segmentation& s) {
  std::vector<std::size_t> prefix(s.n_units + 1, 0);
  for (const auto b : s.boundaries) prefix[b + 1] += 1;
  for (std::size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
  return prefix;
}

// Boundaries b with lo <= b < hi, for any integers lo <= hi.
std::size_t count_between(const std::vector<std::size_t>& prefix, std::ptrdiff_t lo, std::ptrdiff_t hi) {
  const auto clamp = [&](std::ptrdiff_t v) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, static_cast<std::ptrdiff_t>(prefix.size()) - 1));
  };
  return prefix[clamp(hi)] - prefix[clamp(lo)];
}

std::size_t resolve_window(const Segmentation& ref, const Segmentation& hyp, std::optional<std::size_t> k) {
  ref.validate();
  hyp.validate();
  if (ref.n_units != hyp.n_units) {
    throw InvalidArgument("segmentations cover " + std::to_string(ref.n_units) + " and " +
                          std::to_string(hyp.n_units) + " units");
  }
  if (ref.n_units < 2) throw InvalidArgument("segmentation needs at least two units");
  const std::size_t window = k.value_or(default_window_size(ref));
  if (window == 0) throw InvalidArgument("window size must be positive");
  if (ref.n_units <= window) {
    throw InvalidArgument("window size " + std::to_string(window) + " is not smaller than " +
                          std::to_string(ref.n_units) + " units");
  }
  return window;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

void Segmentation::validate() const {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i] == 0 || boundaries[i] >= n_units) {
      throw InvalidArgument("boundary " + std::to_string(boundaries[i]) + " outside (0, " + std::to_string(n_units) + ")");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) throw InvalidArgument("boundaries must be strictly increasing");
  }
}

std::size_t default_window_size(const Segmentation& ref) {
  const double half_mean = static_cast<double>(ref.n_units) / (2.0 * static_cast<double>(ref.boundaries.size() + 1));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::nearbyint(half_mean)));
}

double window_diff(const Segmentation& ref, const Segmentation& hyp, std::optional<std::size_t> k) {
  const std::size_t window = resolve_window(ref, hyp, k);
  const auto r = boundary_prefix(ref);
  const auto h = boundary_prefix(hyp);
  const std::size_t windows = ref.n_units - window;
  std::size_t errors = 0;
  for (std::size_t i = 1; i <= windows; ++i) {
    const auto lo = static_cast<std::ptrdiff_t>(i);
    const auto hi = static_cast<std::ptrdiff_t>(i + window);
    errors += count_between(r, lo, hi) != count_between(h, lo, hi);
  }
  return static_cast<double>(errors) / static_cast<double>(windows);
}

WinPR win_pr(const Segmentation& ref, const Segmentation& hyp, std::optional<std::size_t> k) {
  const std::size_t window = resolve_window(ref, hyp, k);
  const auto r = boundary_prefix(ref);
  const auto h = boundary_prefix(hyp);
  WinPR out;
  const auto first = 1 - static_cast<std::ptrdiff_t>(window);
  const auto last = static_cast<std::ptrdiff_t>(ref.n_units) - 1;
  for (std::ptrdiff_t i = first; i <= last; ++i) {
    const std::size_t R = count_between(r, i, i + static_cast<std::ptrdiff_t>(window));
    const std::size_t C = count_between(h, i, i + static_cast<std::ptrdiff_t>(window));
    out.true_positives += std::min(R, C);
    out.false_positives += C > R ? C - R : 0;
    out.false_negatives += R > C ? R - C : 0;
  }
  const auto tp = static_cast<double>(out.true_positives);
  const std::size_t p_den = out.true_positives + out.false_positives;
  const std::size_t r_den = out.true_positives + out.false_negatives;
  out.precision = p_den == 0 ? 1.0 : tp / static_cast<double>(p_den);
  out.recall = r_den == 0 ? 1.0 : tp / static_cast<double>(r_den);
  out.f = harmonic(out.precision, out.recall);
  return out;
}

Segmentation baseline_rnd(std::size_t n_units, std::uint64_t seed) {
  Segmentation s{n_units, {}};
  if (n_units < 2) return s;
  Rng rng(seed);
  const std::size_t count = std::min<std::size_t>(rng.uniform_int(0, 10), n_units - 1);
  for (const auto i : rng.sample_without_replacement(n_units - 1, count)) s.boundaries.push_back(i + 1);
  std::sort(s.boundaries.begin(), s.boundaries.end());
  return s;
}

Segmentation equal_borders(std::size_t n_units, std::size_t m) {
  Segmentation s{n_units, {}};
  if (n_units < 2) return s;
  m = std::min(m, n_units - 1);
  for (std::size_t j = 1; j <= m; ++j) {
    const double target = static_cast<double>(j) * static_cast<double>(n_units) / static_cast<double>(m + 1);
    s.boundaries.push_back(static_cast<std::size_t>(std::floor(target + 0.5)));
  }
  return s;
}

Segmentation baseline_eq(std::size_t n_units, std::uint64_t seed) {
  Rng rng(seed);
  return equal_borders(n_units, rng.uniform_int(0, 10));
}

EvalReport evaluate_corpus(std::span<const EvalPair> pairs, Execution exec) {
  if (pairs.empty()) throw InvalidArgument("evaluate_corpus: no document pairs");
  EvalReport report;
  report.per_document.resize(pairs.size());
  for_each_index(pairs.size(), exec, [&](std::size_t i) {
    const auto& pair = pairs[i];
    try {
      const WinPR pr = win_pr(pair.ref, pair.hyp);
      report.per_document[i] = {pair.id, window_diff(pair.ref, pair.hyp), pr.precision, pr.recall, pr.f};
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(pair.id + ": " + e.what());
    }
  });
  for (const auto& d : report.per_document) {
    report.window_diff += d.window_diff;
    report.win_p += d.win_p;
    report.win_r += d.win_r;
    report.win_f += d.win_f;
  }
  const auto n = static_cast<double>(pairs.size());
  report.window_diff /= n;
  report.win_p /= n;
  report.win_r /= n;
  report.win_f /= n;
  report.win_f_of_means = harmonic(report.win_p, report.win_r);
  return report;
}

nlohmann::json report_to_json(const EvalReport& report, bool per_document) {
  nlohmann::json j = {{"windowDiff", report.window_diff},
                      {"winP", report.win_p},
                      {"winR", report.win_r},
                      {"winF", report.win_f},
                      {"winF_of_means", report.win_f_of_means},
                      {"documents", report.per_document.size()}};
  if (per_document) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : report.per_document) {
      docs.push_back({{"id", d.id}, {"windowDiff", d.window_diff}, {"winP", d.win_p}, {"winR", d.win_r}, {"winF", d.win_f}});
    }
    j["per_document"] = docs;
  }
  return j;
}

std::string format_report_table(std::span<const std::pair<std::string, EvalReport>> rows) {
  std::size_t name_width = 5;
  for (const auto& [name, r] : rows) name_width = std::max(name_width, name.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %10s  %8s  %8s  %8s\n", static_cast<int>(name_width), "", "windowDiff", "winP",
                "winR", "winF");
  out << line;
  for (const auto& [name, r] : rows) {
    std::snprintf(line, sizeof line, "%-*s  %10.4f  %8.4f  %8.4f  %8.4f\n", static_cast<int>(name_width), name.c_str(),
                  r.window_diff, r.win_p, r.win_r, r.win_f);
    out << line;
  }
  return out.str();
}

}  // namespace stylebreach

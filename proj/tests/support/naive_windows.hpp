#pragma once

// Brute-force WindowDiff / WinPR: boundaries are looked up one unit gap at a
// time for every window, with no prefix sums.

#include <algorithm>
#include <cstddef>

#include "stylebreach/seg_metrics.hpp"

namespace naive {

// Boundaries b with i <= b < i + k that are legal positions in (0, N).
inline std::size_t between(const stylebreach::Segmentation& s, long i, long k) {
  std::size_t n = 0;
  for (long u = i; u < i + k; ++u) {
    if (u < 1 || u > static_cast<long>(s.n_units) - 1) continue;
    n += std::count(s.boundaries.begin(), s.boundaries.end(), static_cast<std::size_t>(u));
  }
  return n;
}

inline double window_diff(const stylebreach::Segmentation& ref, const stylebreach::Segmentation& hyp, long k) {
  const long n = static_cast<long>(ref.n_units);
  std::size_t differ = 0;
  for (long i = 1; i <= n - k; ++i) differ += between(ref, i, k) != between(hyp, i, k);
  return static_cast<double>(differ) / static_cast<double>(n - k);
}

inline stylebreach::WinPR win_pr(const stylebreach::Segmentation& ref, const stylebreach::Segmentation& hyp, long k) {
  stylebreach::WinPR out;
  const long n = static_cast<long>(ref.n_units);
  for (long i = 1 - k; i <= n - 1; ++i) {
    const std::size_t r = between(ref, i, k);
    const std::size_t c = between(hyp, i, k);
    if (r <= c) {
      out.true_positives += r;
      out.false_positives += c - r;
    } else {
      out.true_positives += c;
      out.false_negatives += r - c;
    }
  }
  const double tp = static_cast<double>(out.true_positives);
  const std::size_t p_den = out.true_positives + out.false_positives;
  const std::size_t r_den = out.true_positives + out.false_negatives;
  out.precision = p_den == 0 ? 1.0 : tp / static_cast<double>(p_den);
  out.recall = r_den == 0 ? 1.0 : tp / static_cast<double>(r_den);
  out.f = out.precision + out.recall == 0.0 ? 0.0 : 2 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

}  // namespace naive

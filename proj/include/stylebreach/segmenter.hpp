#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylebreach {

inline constexpr std::size_t kDefaultSegmentCount = 4;
inline constexpr double kDefaultWindowOverlap = 1.0 / 3.0;

/// Half-open token range [begin, end) of one document.
struct SegmentView {
  std::string doc_id;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t index = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const SegmentView&) const = default;
};

/// k contiguous segments whose sizes differ by at most one; the remainder
/// goes to the earliest segments. Throws InvalidArgument if token_count < k.
std::vector<SegmentView> split_fixed(std::string_view doc_id, std::size_t token_count,
                                     std::size_t k = kDefaultSegmentCount);

/// Overlapping windows of `size` tokens with stride size - floor(size * overlap).
/// A final window ending at the last token is appended when the stride
/// leaves a tail uncovered. A stream shorter than `size` yields one window.
std::vector<SegmentView> sliding_windows(std::string_view doc_id, std::size_t token_count,
                                         std::size_t size,
                                         double overlap_fraction = kDefaultWindowOverlap);

/// Window size used for sliding extraction: token_count / segments, at
/// least 3, at most token_count.
std::size_t default_window_size(std::size_t token_count,
                                std::size_t segments = kDefaultSegmentCount);

/// Per dimension, the largest |v_i[d] - v_j[d]| over all pairs, i.e.
/// max_i v_i[d] - min_i v_i[d]. A single vector yields zeros.
std::vector<double> max_pairwise_diff(std::span<const std::vector<double>> vectors);

}  // namespace stylebreach

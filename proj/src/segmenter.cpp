#include "stylebreach/segmenter.hpp"

#include <algorithm>
#include <cmath>

#include "stylebreach/error.hpp"

namespace stylebreach {

std::vector<SegmentView> split_fixed(std::string_view doc_id, std::size_t token_count,
                                     std::size_t k) {
  if (k == 0) throw InvalidArgument("segment count must be positive");
  if (token_count < k) {
    throw InvalidArgument("cannot split " + std::to_string(token_count) + " tokens into " +
                          std::to_string(k) + " segments");
  }
  std::vector<SegmentView> out;
  out.reserve(k);
  const std::size_t base = token_count / k;
  const std::size_t remainder = token_count % k;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t size = base + (i < remainder ? 1 : 0);
    out.push_back({std::string(doc_id), begin, begin + size, i});
    begin += size;
  }
  return out;
}

std::vector<SegmentView> sliding_windows(std::string_view doc_id, std::size_t token_count,
                                         std::size_t size, double overlap_fraction) {
  if (token_count == 0) return {};
  if (token_count <= size) return {{std::string(doc_id), 0, token_count, 0}};
  if (size < 3) throw InvalidArgument("sliding window size must be at least 3");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw InvalidArgument("window overlap fraction must lie in [0, 1)");
  }

  const auto overlap = static_cast<std::size_t>(std::floor(static_cast<double>(size) * overlap_fraction));
  const std::size_t stride = size - overlap;
  std::vector<SegmentView> out;
  std::size_t start = 0;
  for (; start + size <= token_count; start += stride) {
    out.push_back({std::string(doc_id), start, start + size, out.size()});
  }
  if (out.back().end < token_count) {
    out.push_back({std::string(doc_id), token_count - size, token_count, out.size()});
  }
  return out;
}

std::size_t default_window_size(std::size_t token_count, std::size_t segments) {
  const std::size_t size = std::max<std::size_t>(3, token_count / std::max<std::size_t>(1, segments));
  return std::min(size, token_count);
}

std::vector<double> max_pairwise_diff(std::span<const std::vector<double>> vectors) {
  if (vectors.empty()) throw InvalidArgument("max_pairwise_diff needs at least one vector");
  const std::size_t dim = vectors.front().size();
  std::vector<double> lo = vectors.front();
  std::vector<double> hi = vectors.front();
  for (const auto& v : vectors.subspan(1)) {
    if (v.size() != dim) throw InvalidArgument("max_pairwise_diff: dimension mismatch");
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  }
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) out[d] = hi[d] - lo[d];
  return out;
}

}  // namespace stylebreach

#include "stylebreach/edit_distance.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace stylebreach {

// Lowrance-Wagner formulation with a last-row-seen table per byte value.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t inf = n + m;
  const std::size_t width = m + 2;
  std::vector<std::size_t> d((n + 2) * width, 0);
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * width + j]; };

  at(0, 0) = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    at(i + 1, 0) = inf;
    at(i + 1, 1) = i;
  }
  for (std::size_t j = 0; j <= m; ++j) {
    at(0, j + 1) = inf;
    at(1, j + 1) = j;
  }

  std::array<std::size_t, 256> last_row{};
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_match_col = 0;
    const auto ca = static_cast<unsigned char>(a[i - 1]);
    for (std::size_t j = 1; j <= m; ++j) {
      const auto cb = static_cast<unsigned char>(b[j - 1]);
      const std::size_t i1 = last_row[cb];
      const std::size_t j1 = last_match_col;
      const std::size_t cost = ca == cb ? 0 : 1;
      if (cost == 0) last_match_col = j;
      at(i + 1, j + 1) = std::min({at(i, j) + cost, at(i + 1, j) + 1, at(i, j + 1) + 1,
                                   at(i1, j1) + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[ca] = i;
  }
  return at(n + 1, m + 1);
}

}  // namespace stylebreach

#pragma once

#include <cstddef>
#include <string_view>

namespace stylebreach {

/// Unrestricted Damerau-Levenshtein distance (insertions, deletions,
/// substitutions and transpositions of adjacent symbols, where a transposed
/// pair may be edited further). Operates on bytes.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

}  // namespace stylebreach

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nvsyn {

// Lookup key for labels: case-fold, ASCII quotes, trimmed, single spaces,
// trailing .,;:! removed.
std::string fold_label(std::string_view s);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// split on sep, trim pieces, drop empties
std::vector<std::string> split_list(std::string_view s, char sep);

std::size_t levenshtein(std::string_view a, std::string_view b);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// 64-bit FNV-1a, hex encoded
std::string fnv1a_hex(std::string_view s);

}  // namespace nvsyn

#pragma once

#include <string_view>
#include <vector>

namespace magnet {

/// Coarse node-type category. Every name in the 69-name node-type
/// vocabulary belongs to exactly one granularity.
enum class Granularity { Statement = 0, Expression = 1, Symbol = 2 };

inline constexpr int kGranularityCount = 3;

const char* to_string(Granularity g);

/// Two-letter code used in distribution tables ("St", "Ex", "Sy").
const char* short_code(Granularity g);

/// The closed node-type vocabulary, grouped: 17 Statement, 20 Expression,
/// 32 Symbol names (69 total). Order is fixed: Statement block, then
/// Expression, then Symbol.
const std::vector<std::pair<std::string_view, Granularity>>& node_type_table();

bool is_known_node_type(std::string_view name);

/// Granularity of a vocabulary name. Throws UnknownTypeError for names
/// outside the vocabulary.
Granularity granularity_of(std::string_view name);

}  // namespace magnet

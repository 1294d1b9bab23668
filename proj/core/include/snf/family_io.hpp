#pragma once

#include <string>

#include "snf/family.hpp"

namespace snf {

/// Parse a family from its JSON text. Formats:
///   {"n": 4, "explicit": [[2,1,3,4], ...]}
///   {"n": 6, "row": 1, "columns": [1,2,3], "added": [...], "removed": [...]}
///   {"n": 6, "column": 2, "rows": [1,4], ...}
/// Permutations are one-based image arrays; throws std::invalid_argument with
/// the offending field named.
BooleanFamily parse_family_json(const std::string& text);

BooleanFamily load_family(const std::string& path);

/// Serialized family in the same format (one-based, deterministic order).
std::string family_to_json(const BooleanFamily& F);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace snf

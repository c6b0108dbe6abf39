#pragma once

#include <optional>
#include <string>

#include "hawk/storage/table.hpp"

namespace hawk {

/// Rows decoded to plain values and sorted lexicographically by all
/// columns. Compiled variants may emit rows in any order; comparisons and
/// checksums run over this canonical form.
std::vector<Row> canonical_rows(const Table& table);

/// Canonical multiset comparison: ints and strings exact, floats within
/// `rel_tol` relative. Returns a diff message, or nullopt when equal.
std::optional<std::string> compare_result_tables(const Table& expected, const Table& actual,
                                                 double rel_tol = 1e-9);

/// FNV-1a over the canonical row stream; bit-stable across runs and
/// worker counts for integer/string results.
uint64_t result_checksum(const Table& table);

}  // namespace hawk

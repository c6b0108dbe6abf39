#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hawk/error.hpp"

namespace hawk {

enum class ColumnKind { Int64, Float64, String };

const char* to_string(ColumnKind kind);

/// Cell value used for row-wise construction and read-back.
using Value = std::variant<int64_t, double, std::string>;

/// A single immutable column. String columns are dictionary encoded:
/// per-row codes index into an ordered lexicon of unique strings
/// (first-appearance order).
class Column {
 public:
  explicit Column(ColumnKind kind) : kind_(kind) {}

  ColumnKind kind() const { return kind_; }
  std::size_t size() const {
    return kind_ == ColumnKind::Float64 ? floats_.size() : ints_.size();
  }

  std::span<const int64_t> ints() const { return ints_; }
  std::span<const double> floats() const { return floats_; }
  /// Dictionary codes of a string column (alias of ints()).
  std::span<const int64_t> codes() const { return ints_; }
  const std::vector<std::string>& lexicon() const { return lexicon_; }

  const std::string& decode(int64_t code) const;
  /// Lexicon index of `s`, or -1 when absent. Codes are never negative,
  /// so -1 compares unequal to every stored code.
  int64_t find_code(const std::string& s) const;

  Value value_at(std::size_t row) const;

  /// Exact number of distinct values; computed once at construction.
  std::size_t distinct_count() const { return distinct_count_; }

  bool operator==(const Column& other) const;

  // Construction interface (used by table builders only; columns are
  // immutable once the owning table is built).
  void append_int(int64_t v) { ints_.push_back(v); }
  void append_float(double v) { floats_.push_back(v); }
  /// Slow path: linear lexicon lookup. Table::append_row keeps dictionary
  /// maps so bulk loads stay linear.
  void append_string(const std::string& s);
  void append_code(int64_t code) { ints_.push_back(code); }
  void add_lexicon_entry(const std::string& s) { lexicon_.push_back(s); }
  void finalize();

 private:
  ColumnKind kind_;
  std::vector<int64_t> ints_;   // Int64 values or dictionary codes
  std::vector<double> floats_;  // Float64 values
  std::vector<std::string> lexicon_;
  std::size_t distinct_count_ = 0;
};

}  // namespace hawk

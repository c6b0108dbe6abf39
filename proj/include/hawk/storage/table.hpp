#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hawk/storage/column.hpp"

namespace hawk {

struct AttributeSpec {
  std::string name;
  ColumnKind kind;
};
using Schema = std::vector<AttributeSpec>;

using Row = std::vector<Value>;

/// Immutable in-memory columnar relation. Tables are append-once during
/// construction and never mutated afterwards, so they are safe to share
/// across threads.
class Table {
 public:
  Table(std::string name, Schema schema);

  const std::string& name() const { return name_; }
  std::size_t row_count() const { return row_count_; }
  std::size_t column_count() const { return columns_.size(); }

  const std::string& column_name(std::size_t i) const { return names_[i]; }
  const Column& column(std::size_t i) const { return columns_[i]; }
  /// Index of the named column, or -1 when absent.
  int find_column(const std::string& name) const;

  Schema schema() const;
  Row row(std::size_t i) const;

  bool operator==(const Table& other) const;

  void append_row(const Row& row);
  void finalize();

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<Column> columns_;
  std::size_t row_count_ = 0;
  // Dictionary maps for string columns; only populated between
  // construction and finalize().
  std::vector<std::unordered_map<std::string, int64_t>> build_dicts_;
};

using TablePtr = std::shared_ptr<const Table>;

/// Builds a table from a row range, dictionary-encoding strings in
/// first-appearance order.
Table create_table(const std::string& name, const Schema& schema,
                   const std::vector<Row>& rows);

}  // namespace hawk

#include "hawk/storage/table.hpp"

#include <algorithm>
#include <unordered_set>

namespace hawk {

const char* to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Int64: return "int64";
    case ColumnKind::Float64: return "float64";
    case ColumnKind::String: return "string";
  }
  return "?";
}

void Column::append_string(const std::string& s) {
  int64_t code = find_code(s);
  if (code < 0) {
    code = static_cast<int64_t>(lexicon_.size());
    lexicon_.push_back(s);
  }
  ints_.push_back(code);
}

const std::string& Column::decode(int64_t code) const {
  if (code < 0 || static_cast<std::size_t>(code) >= lexicon_.size())
    throw Error("dictionary code out of range");
  return lexicon_[static_cast<std::size_t>(code)];
}

int64_t Column::find_code(const std::string& s) const {
  for (std::size_t i = 0; i < lexicon_.size(); ++i)
    if (lexicon_[i] == s) return static_cast<int64_t>(i);
  return -1;
}

Value Column::value_at(std::size_t row) const {
  switch (kind_) {
    case ColumnKind::Int64: return ints_[row];
    case ColumnKind::Float64: return floats_[row];
    case ColumnKind::String: return lexicon_[static_cast<std::size_t>(ints_[row])];
  }
  throw Error("bad column kind");
}

void Column::finalize() {
  switch (kind_) {
    case ColumnKind::Int64: {
      std::unordered_set<int64_t> seen(ints_.begin(), ints_.end());
      distinct_count_ = seen.size();
      break;
    }
    case ColumnKind::Float64: {
      std::unordered_set<double> seen(floats_.begin(), floats_.end());
      distinct_count_ = seen.size();
      break;
    }
    case ColumnKind::String:
      distinct_count_ = lexicon_.size();
      break;
  }
}

bool Column::operator==(const Column& other) const {
  return kind_ == other.kind_ && ints_ == other.ints_ && floats_ == other.floats_ &&
         lexicon_ == other.lexicon_;
}

Table::Table(std::string name, Schema schema) : name_(std::move(name)) {
  for (const auto& attr : schema) {
    if (find_column(attr.name) >= 0)
      throw DuplicateColumn("duplicate column '" + attr.name + "' in table '" + name_ + "'");
    names_.push_back(attr.name);
    columns_.emplace_back(attr.kind);
  }
  build_dicts_.resize(columns_.size());
}

int Table::find_column(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

Schema Table::schema() const {
  Schema s;
  s.reserve(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i)
    s.push_back({names_[i], columns_[i].kind()});
  return s;
}

Row Table::row(std::size_t i) const {
  Row r;
  r.reserve(columns_.size());
  for (const auto& c : columns_) r.push_back(c.value_at(i));
  return r;
}

bool Table::operator==(const Table& other) const {
  return names_ == other.names_ && row_count_ == other.row_count_ &&
         columns_ == other.columns_;
}

void Table::append_row(const Row& row) {
  if (row.size() != columns_.size())
    throw SchemaMismatch("row arity " + std::to_string(row.size()) +
                         " does not match schema arity " + std::to_string(columns_.size()) +
                         " in table '" + name_ + "'");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const Value& v = row[i];
    switch (columns_[i].kind()) {
      case ColumnKind::Int64:
        if (!std::holds_alternative<int64_t>(v))
          throw SchemaMismatch("column '" + names_[i] + "' expects int64");
        columns_[i].append_int(std::get<int64_t>(v));
        break;
      case ColumnKind::Float64:
        if (std::holds_alternative<double>(v))
          columns_[i].append_float(std::get<double>(v));
        else if (std::holds_alternative<int64_t>(v))
          columns_[i].append_float(static_cast<double>(std::get<int64_t>(v)));
        else
          throw SchemaMismatch("column '" + names_[i] + "' expects float64");
        break;
      case ColumnKind::String: {
        if (!std::holds_alternative<std::string>(v))
          throw SchemaMismatch("column '" + names_[i] + "' expects string");
        const std::string& s = std::get<std::string>(v);
        auto& dict = build_dicts_[i];
        auto [it, inserted] = dict.try_emplace(s, static_cast<int64_t>(dict.size()));
        if (inserted) columns_[i].add_lexicon_entry(s);
        columns_[i].append_code(it->second);
        break;
      }
    }
  }
  ++row_count_;
}

void Table::finalize() {
  for (auto& c : columns_) c.finalize();
  build_dicts_.clear();
  build_dicts_.shrink_to_fit();
}

Table create_table(const std::string& name, const Schema& schema,
                   const std::vector<Row>& rows) {
  Table table(name, schema);
  for (const auto& row : rows) table.append_row(row);
  table.finalize();
  return table;
}

}  // namespace hawk

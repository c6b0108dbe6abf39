#include "hawk/storage/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hawk {

namespace {

// Splits one logical CSV record starting at `pos`. Handles quoted fields
// spanning newlines. Returns false at end of input.
bool next_record(const std::string& text, std::size_t& pos, char delimiter,
                 std::size_t& line_no, std::vector<std::string>& fields,
                 std::vector<std::size_t>& field_cols) {
  fields.clear();
  field_cols.clear();
  if (pos >= text.size()) return false;

  std::string field;
  std::size_t col = 1;
  std::size_t field_col = 1;
  bool quoted = false;
  bool any = false;
  auto flush = [&] {
    fields.push_back(field);
    field_cols.push_back(field_col);
    field.clear();
  };
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          col += 2;
          continue;
        }
        quoted = false;
        ++pos;
        ++col;
        continue;
      }
      if (c == '\n') ++line_no;
      field.push_back(c);
      ++pos;
      ++col;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
      ++pos;
      ++col;
      continue;
    }
    if (c == delimiter) {
      flush();
      any = true;
      ++pos;
      ++col;
      field_col = col;
      continue;
    }
    if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
      ++pos;
      continue;
    }
    if (c == '\n') {
      ++pos;
      ++line_no;
      break;
    }
    field.push_back(c);
    any = true;
    ++pos;
    ++col;
  }
  if (!any && field.empty() && fields.empty()) return false;
  flush();
  return true;
}

int64_t parse_int(const std::string& s, std::size_t line, std::size_t col) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, col, "invalid int64 literal '" + s + "'");
  return v;
}

double parse_float(const std::string& s, std::size_t line, std::size_t col) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, col, "invalid float64 literal '" + s + "'");
  }
}

bool needs_quoting(const std::string& s, char delimiter) {
  return s.find(delimiter) != std::string::npos || s.find('"') != std::string::npos ||
         s.find('\n') != std::string::npos;
}

}  // namespace

Table load_csv(const std::string& path, const std::string& table_name,
               const Schema& schema, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Table table(table_name, schema);
  std::size_t pos = 0;
  std::size_t line_no = 1;
  std::vector<std::string> fields;
  std::vector<std::size_t> field_cols;
  bool skip_header = options.header;
  Row row;
  while (true) {
    std::size_t record_line = line_no;
    if (!next_record(text, pos, options.delimiter, line_no, fields, field_cols)) break;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (fields.size() != schema.size())
      throw ParseError(record_line, 1,
                       "expected " + std::to_string(schema.size()) + " fields, got " +
                           std::to_string(fields.size()));
    row.clear();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      switch (schema[i].kind) {
        case ColumnKind::Int64:
          row.emplace_back(parse_int(fields[i], record_line, field_cols[i]));
          break;
        case ColumnKind::Float64:
          row.emplace_back(parse_float(fields[i], record_line, field_cols[i]));
          break;
        case ColumnKind::String:
          row.emplace_back(fields[i]);
          break;
      }
    }
    table.append_row(row);
  }
  table.finalize();
  return table;
}

void save_csv(const Table& table, const std::string& path, const CsvOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (options.header) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (c) out << options.delimiter;
      out << table.column_name(c);
    }
    out << '\n';
  }
  std::ostringstream line;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    line.str("");
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (c) line << options.delimiter;
      const Column& col = table.column(c);
      switch (col.kind()) {
        case ColumnKind::Int64: line << col.ints()[r]; break;
        case ColumnKind::Float64: {
          char buf[32];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, col.floats()[r],
                                         std::chars_format::general, 17);
          (void)ec;
          line.write(buf, ptr - buf);
          break;
        }
        case ColumnKind::String: {
          const std::string& s = col.decode(col.codes()[r]);
          if (needs_quoting(s, options.delimiter)) {
            line << '"';
            for (char ch : s) {
              if (ch == '"') line << "\"\"";
              else line << ch;
            }
            line << '"';
          } else {
            line << s;
          }
          break;
        }
      }
    }
    line << '\n';
    out << line.str();
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace hawk

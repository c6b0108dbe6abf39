#include "hawk/planner/result.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace hawk {

namespace {

bool value_less(const Value& a, const Value& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (std::holds_alternative<int64_t>(a)) return std::get<int64_t>(a) < std::get<int64_t>(b);
  if (std::holds_alternative<double>(a)) return std::get<double>(a) < std::get<double>(b);
  return std::get<std::string>(a) < std::get<std::string>(b);
}

bool row_less(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (value_less(a[i], b[i])) return true;
    if (value_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

std::string value_text(const Value& v) {
  if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
  if (std::holds_alternative<double>(v)) {
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(v);
    return os.str();
  }
  return "'" + std::get<std::string>(v) + "'";
}

}  // namespace

std::vector<Row> canonical_rows(const Table& table) {
  std::vector<Row> rows;
  rows.reserve(table.row_count());
  for (std::size_t i = 0; i < table.row_count(); ++i) rows.push_back(table.row(i));
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::optional<std::string> compare_result_tables(const Table& expected, const Table& actual,
                                                 double rel_tol) {
  if (expected.column_count() != actual.column_count())
    return "column count differs: expected " + std::to_string(expected.column_count()) +
           ", got " + std::to_string(actual.column_count());
  for (std::size_t c = 0; c < expected.column_count(); ++c) {
    if (expected.column_name(c) != actual.column_name(c))
      return "column " + std::to_string(c) + " name differs: '" + expected.column_name(c) +
             "' vs '" + actual.column_name(c) + "'";
    if (expected.column(c).kind() != actual.column(c).kind())
      return "column '" + expected.column_name(c) + "' kind differs";
  }
  if (expected.row_count() != actual.row_count())
    return "row count differs: expected " + std::to_string(expected.row_count()) + ", got " +
           std::to_string(actual.row_count());

  std::vector<Row> lhs = canonical_rows(expected);
  std::vector<Row> rhs = canonical_rows(actual);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t c = 0; c < lhs[i].size(); ++c) {
      const Value& a = lhs[i][c];
      const Value& b = rhs[i][c];
      bool ok;
      if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
        double x = std::get<double>(a), y = std::get<double>(b);
        double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
        ok = std::fabs(x - y) <= rel_tol * scale;
      } else {
        ok = a == b;
      }
      if (!ok)
        return "row " + std::to_string(i) + " column '" + expected.column_name(c) +
               "': expected " + value_text(a) + ", got " + value_text(b);
    }
  }
  return std::nullopt;
}

uint64_t result_checksum(const Table& table) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix_bytes = [&](const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  for (std::size_t c = 0; c < table.column_count(); ++c)
    mix_bytes(table.column_name(c).data(), table.column_name(c).size());
  for (const Row& row : canonical_rows(table)) {
    for (const Value& v : row) {
      if (std::holds_alternative<int64_t>(v)) {
        int64_t x = std::get<int64_t>(v);
        mix_bytes(&x, sizeof x);
      } else if (std::holds_alternative<double>(v)) {
        double x = std::get<double>(v);
        mix_bytes(&x, sizeof x);
      } else {
        const std::string& s = std::get<std::string>(v);
        mix_bytes(s.data(), s.size());
      }
    }
  }
  return h;
}

}  // namespace hawk

#pragma once

#include <string>

#include "hawk/storage/table.hpp"

namespace hawk {

struct CsvOptions {
  char delimiter = ',';
  bool header = false;
};

/// Loads an RFC-4180-style file under the given schema. Quoted fields may
/// contain the delimiter, doubled quotes and newlines. Integers are parsed
/// base 10, floats as decimal literals.
Table load_csv(const std::string& path, const std::string& table_name,
               const Schema& schema, const CsvOptions& options = {});

/// Writes a table in the same format (used by the CLI `gen` command).
void save_csv(const Table& table, const std::string& path,
              const CsvOptions& options = {});

}  // namespace hawk

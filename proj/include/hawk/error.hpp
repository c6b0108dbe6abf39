#pragma once

#include <stdexcept>
#include <string>

namespace hawk {

/// Base class for all engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// storage
struct SchemaMismatch : Error { using Error::Error; };
struct DuplicateColumn : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + reason),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

// sql front end
struct SyntaxError : Error {
  SyntaxError(std::size_t position, const std::string& what)
      : Error("syntax error at offset " + std::to_string(position) + ": " + what),
        position(position) {}
  std::size_t position;
};
struct UnknownTable : Error { using Error::Error; };
struct UnknownAttribute : Error { using Error::Error; };
struct TypeError : Error { using Error::Error; };

// planner / ir / codegen
struct UnsupportedPlan : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct PlanTooLarge : Error { using Error::Error; };

// runtime
struct CapacityExceeded : Error { using Error::Error; };
struct DuplicateKey : Error { using Error::Error; };
struct DivergentPlan : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct EmptyAggregate : Error { using Error::Error; };

// optimizer / bench
struct BudgetExceeded : Error { using Error::Error; };
struct EmptySuite : Error { using Error::Error; };

}  // namespace hawk

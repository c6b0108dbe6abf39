#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hawk/storage/table.hpp"

namespace hawk::sql {

/// Reference to an attribute, resolved against the FROM list. `table` is
/// the FROM index; the pseudo indices kDerivedTable / kAggOutput address
/// Map outputs and Aggregate outputs.
inline constexpr int kDerivedTable = -2;
inline constexpr int kAggOutput = -3;

struct AttrRef {
  int table = -1;
  int column = -1;
  ColumnKind kind = ColumnKind::Int64;
  std::string name;
  bool operator==(const AttrRef&) const = default;
};

enum class BinOp : uint8_t { Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : uint8_t { Attr, IntLit, FloatLit, Binary };
  Kind kind = Kind::IntLit;
  AttrRef attr;
  int64_t ival = 0;
  double fval = 0.0;
  BinOp op = BinOp::Add;
  ExprPtr lhs, rhs;

  ColumnKind result_kind() const;
};

bool equal(const ExprPtr& a, const ExprPtr& b);
std::string render(const Expr& e);

enum class CompareOp : uint8_t { Lt, Le, Eq, Ge, Gt, Ne };

/// One conjunct of a WHERE clause: attr <op> literal or attr <op> attr.
struct Comparison {
  CompareOp op = CompareOp::Eq;
  AttrRef lhs;
  bool rhs_is_attr = false;
  AttrRef rhs_attr;
  Value rhs_literal = int64_t{0};
  bool operator==(const Comparison&) const = default;
};

enum class AggFn : uint8_t { Sum, Count, Min, Max, Avg };
const char* to_string(AggFn fn);

struct AggItem {
  AggFn fn = AggFn::Count;
  bool has_input = false;  // COUNT has none
  AttrRef input;           // base or derived attribute
  std::string output_name;
  bool operator==(const AggItem&) const = default;
};

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

/// Logical operator tree. Join children: left is the hash build side.
struct PlanNode {
  enum class Kind : uint8_t { Scan, Select, Join, CrossJoin, Map, Aggregate, Project };
  Kind kind = Kind::Scan;

  // Scan
  int table = -1;  // FROM index
  std::string table_name;

  // unary operators keep their child in `left`
  PlanPtr left, right;

  // Select
  std::vector<Comparison> predicate;

  // Join
  AttrRef left_key, right_key;

  // Map
  ExprPtr expr;
  int derived_id = -1;
  std::string output_name;

  // Aggregate
  std::vector<AttrRef> group_keys;
  std::vector<AggItem> aggregates;

  // Project
  std::vector<AttrRef> attrs;
  std::vector<std::string> names;
};

bool equal(const PlanPtr& a, const PlanPtr& b);
std::string dump(const PlanPtr& plan);

/// Catalog entry visible to the parser: schema only, no data.
struct CatalogEntry {
  std::string name;
  Schema schema;
};
using Catalog = std::vector<CatalogEntry>;

Catalog make_catalog(const std::vector<TablePtr>& tables);

}  // namespace hawk::sql

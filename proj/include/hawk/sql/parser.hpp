#pragma once

#include "hawk/sql/plan.hpp"

namespace hawk::sql {

/// Parses a SELECT-FROM-WHERE-GROUP BY query into a resolved logical plan.
/// WHERE equality conjuncts between attributes of two different tables
/// become join keys; remaining conjuncts become selections. Keywords are
/// case-insensitive; the query text is UTF-8.
PlanPtr parse_query(const std::string& text, const Catalog& catalog);

/// Renders a plan back to SQL. unparse(parse(q)) re-parses to a
/// structurally equal plan.
std::string unparse(const PlanPtr& plan);

}  // namespace hawk::sql

#pragma once

#include "hawk/sql/plan.hpp"

namespace hawk {

/// Row-at-a-time correctness oracle: hash joins via a plain associative
/// map, sequential aggregation, canonical row order. Single-threaded by
/// design. Every compiled variant must produce the same row multiset.
Table reference_execute(const sql::PlanPtr& plan, const std::vector<TablePtr>& tables);

}  // namespace hawk

#pragma once

#include <cstdint>

#include "hawk/storage/table.hpp"

namespace hawk {

/// Deterministic lineorder-style fact table for the benchmark queries.
/// Same (n, seed) yields a bit-identical table. Columns:
///   lo_linenumber     1..n
///   lo_quantity       uniform 1..50
///   lo_discount       uniform 0..10
///   lo_revenue        uniform 1..6,000,000
///   lo_extendedprice  uniform 1..5,000,000
///   lo_shipmode       uniform over 7 distinct strings
///   lo_orderdate      uniform yyyymmdd in 1992..1998
///   lo_partkey        uniform 0..max(1, n/5)-1
///   lo_suppkey        uniform 0..max(1, n/100)-1
///   lo_custkey        uniform 0..max(1, n/50)-1
/// All integer keys are non-negative so hash tables can reserve the
/// minimum int64 as an empty sentinel.
Table gen_lineorder(std::size_t n, uint64_t seed);

/// Dimension tables for the join benchmark query. Keys are the dense
/// range 0..n-1 (unique, suitable as hash-join build side).
Table gen_part(std::size_t n, uint64_t seed);
Table gen_supplier(std::size_t n, uint64_t seed);

}  // namespace hawk

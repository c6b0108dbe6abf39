#include "hawk/storage/generator.hpp"

#include <array>
#include <random>

namespace hawk {

namespace {

// mt19937_64 raw output is pinned by the standard, so tables are
// bit-identical across platforms. Standard-library distributions are not;
// we reduce by modulo instead (the tiny bias is irrelevant here).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  int64_t uniform(int64_t lo, int64_t hi) {  // inclusive bounds
    return lo + static_cast<int64_t>(engine_() % static_cast<uint64_t>(hi - lo + 1));
  }
  double uniform_real(double lo, double hi) {
    double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 7> kShipModes = {
    "AIR", "FOB", "MAIL", "RAIL", "REG AIR", "SHIP", "TRUCK"};

}  // namespace

Table gen_lineorder(std::size_t n, uint64_t seed) {
  Schema schema = {
      {"lo_linenumber", ColumnKind::Int64},  {"lo_quantity", ColumnKind::Int64},
      {"lo_discount", ColumnKind::Int64},    {"lo_revenue", ColumnKind::Int64},
      {"lo_extendedprice", ColumnKind::Int64}, {"lo_shipmode", ColumnKind::String},
      {"lo_orderdate", ColumnKind::Int64},   {"lo_partkey", ColumnKind::Int64},
      {"lo_suppkey", ColumnKind::Int64},     {"lo_custkey", ColumnKind::Int64},
  };
  Table table("lineorder", schema);
  Rng rng(seed);
  const int64_t part_range = std::max<int64_t>(1, static_cast<int64_t>(n / 5));
  const int64_t supp_range = std::max<int64_t>(1, static_cast<int64_t>(n / 100));
  const int64_t cust_range = std::max<int64_t>(1, static_cast<int64_t>(n / 50));
  Row row;
  for (std::size_t i = 0; i < n; ++i) {
    int64_t year = rng.uniform(1992, 1998);
    int64_t month = rng.uniform(1, 12);
    int64_t day = rng.uniform(1, 28);
    row = {static_cast<int64_t>(i + 1),
           rng.uniform(1, 50),
           rng.uniform(0, 10),
           rng.uniform(1, 6000000),
           rng.uniform(1, 5000000),
           std::string(kShipModes[static_cast<std::size_t>(rng.uniform(0, 6))]),
           year * 10000 + month * 100 + day,
           rng.uniform(0, part_range - 1),
           rng.uniform(0, supp_range - 1),
           rng.uniform(0, cust_range - 1)};
    table.append_row(row);
  }
  table.finalize();
  return table;
}

Table gen_part(std::size_t n, uint64_t seed) {
  Schema schema = {
      {"p_partkey", ColumnKind::Int64},
      {"p_category", ColumnKind::String},
      {"p_size", ColumnKind::Int64},
  };
  Table table("part", schema);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  Row row;
  for (std::size_t i = 0; i < n; ++i) {
    row = {static_cast<int64_t>(i),
           "MFGR#" + std::to_string(rng.uniform(0, 24)),
           rng.uniform(1, 50)};
    table.append_row(row);
  }
  table.finalize();
  return table;
}

Table gen_supplier(std::size_t n, uint64_t seed) {
  Schema schema = {
      {"s_suppkey", ColumnKind::Int64},
      {"s_region", ColumnKind::String},
      {"s_balance", ColumnKind::Float64},
  };
  Table table("supplier", schema);
  Rng rng(seed ^ 0xc2b2ae3d27d4eb4full);
  Row row;
  for (std::size_t i = 0; i < n; ++i) {
    row = {static_cast<int64_t>(i),
           "REGION#" + std::to_string(rng.uniform(0, 4)),
           rng.uniform_real(0.0, 10000.0)};
    table.append_row(row);
  }
  table.finalize();
  return table;
}

}  // namespace hawk

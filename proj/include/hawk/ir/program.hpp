#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawk/storage/table.hpp"

namespace hawk {

enum class PipelineKind { Projection, Aggregation };
enum class Strategy { SinglePass, MultiPass, LocalHash, GlobalHash };
enum class MemoryAccess { Sequential, Coalesced };
enum class PredicationMode { Branched, Predicated };
enum class HashTableImpl { LinearProbing, Cuckoo };
enum class HashFunctionKind { Murmur, MultiplyShift };

const char* to_string(PipelineKind k);
const char* to_string(Strategy s);
const char* to_string(MemoryAccess m);
const char* to_string(PredicationMode p);
const char* to_string(HashTableImpl h);
const char* to_string(HashFunctionKind h);

/// Where an operand's bytes come from at kernel time.
enum class AttrRoute : uint8_t {
  Driver,        // column of the pipeline's driver table, indexed by loop id
  BuildPayload,  // column of a hash-join build table, indexed by the probe's
                 // payload row
  CrossAux,      // column of a CROSS_JOIN auxiliary table, indexed by the
                 // nested loop variable
  Derived,       // register produced by an ARITHMETIC op
};

struct OpAttr {
  AttrRoute route = AttrRoute::Driver;
  int table = -1;       // storage table id (Driver/BuildPayload/CrossAux)
  int column = -1;      // column index; Derived: register id
  int descriptor = -1;  // BuildPayload: hash table descriptor id
  int aux_op = -1;      // CrossAux: index of the CROSS_JOIN op in the pipeline
  ColumnKind kind = ColumnKind::Int64;
  std::string name;
  bool operator==(const OpAttr&) const = default;
};

struct OpOperand {
  enum class Kind : uint8_t { Attr, IntLit, FloatLit };
  Kind kind = Kind::IntLit;
  OpAttr attr;
  int64_t ival = 0;
  double fval = 0.0;
  bool operator==(const OpOperand&) const = default;

  static OpOperand of_attr(OpAttr a) {
    OpOperand o;
    o.kind = Kind::Attr;
    o.attr = std::move(a);
    return o;
  }
  static OpOperand of_int(int64_t v) {
    OpOperand o;
    o.kind = Kind::IntLit;
    o.ival = v;
    return o;
  }
  static OpOperand of_float(double v) {
    OpOperand o;
    o.kind = Kind::FloatLit;
    o.fval = v;
    return o;
  }
};

enum class CompareOp : uint8_t { Lt, Le, Eq, Ge, Gt, Ne };
const char* to_string(CompareOp op);

struct OpComparison {
  CompareOp op = CompareOp::Eq;
  OpAttr lhs;
  OpOperand rhs;
  bool operator==(const OpComparison&) const = default;
};

enum class ArithOp : uint8_t { Add, Sub, Mul, Div };
const char* to_string(ArithOp op);

enum class AggFunction : uint8_t { Sum, Count, Min, Max };
const char* to_string(AggFunction fn);

struct OpAggregate {
  AggFunction fn = AggFunction::Count;
  OpOperand input;  // ignored for Count
  ColumnKind out_kind = ColumnKind::Int64;
  std::string name;
  bool operator==(const OpAggregate&) const = default;
};

enum class PipelineOpKind : uint8_t {
  Loop,
  Filter,
  HashPut,
  HashProbe,
  CrossJoin,
  Arithmetic,
  Aggregate,
  HashAggregate,
  Project,
};
const char* to_string(PipelineOpKind k);

/// One pipeline operation. Regular parameters (tables, predicates,
/// attribute sets, aggregation expressions) are fixed at lowering;
/// code-generation modes (predication mode, hash table choice, access
/// offset, loop step) are only touched by transformation passes.
struct PipelineOp {
  PipelineOpKind kind = PipelineOpKind::Loop;

  // regular parameters
  int table = -1;                       // Loop / CrossJoin: storage table id
  std::vector<OpComparison> predicate;  // Filter (conjunction)
  std::vector<OpAttr> keys;             // HashPut/HashProbe/HashAggregate
  std::vector<OpAttr> payload;          // HashPut: attrs fetched via probes
  int descriptor = -1;                  // hash ops: HashTableDescriptor id
  ArithOp arith_op = ArithOp::Add;      // Arithmetic
  OpOperand arith_lhs, arith_rhs;
  int derived_id = -1;                  // Arithmetic output register
  ColumnKind derived_kind = ColumnKind::Int64;
  std::vector<OpAggregate> aggregates;  // Aggregate / HashAggregate
  std::vector<OpAttr> attrs;            // Project

  // code-generation modes
  PredicationMode mode = PredicationMode::Branched;
  HashTableImpl table_impl = HashTableImpl::LinearProbing;
  HashFunctionKind hash_function = HashFunctionKind::Murmur;
  int offset = 0;     // element access offset within an unrolled body
  int loop_step = 1;  // Loop only

  bool operator==(const PipelineOp&) const = default;
};

/// Result schema entry of a pipeline.
struct OutputColumn {
  enum class Source : uint8_t { ProjectAttr, GroupKey, Aggregate, AvgDivide };
  std::string name;
  ColumnKind kind = ColumnKind::Int64;
  Source source = Source::ProjectAttr;
  int index = -1;   // attr index / group key index / aggregate index / sum index
  int index2 = -1;  // AvgDivide: count aggregate index
  int lexicon_table = -1;   // dict columns: decode via this table/column
  int lexicon_column = -1;
  bool operator==(const OutputColumn&) const = default;
};

/// Ordered sequence of pipeline operations plus global properties; the
/// compiler's IR. Programs are immutable values: transformation passes
/// return new programs.
struct PipelineProgram {
  std::vector<PipelineOp> ops;
  PipelineKind kind = PipelineKind::Projection;

  // global properties (set by transformation passes)
  Strategy strategy = Strategy::SinglePass;
  MemoryAccess memory_access = MemoryAccess::Sequential;
  PredicationMode predication = PredicationMode::Branched;
  int unroll_factor = 1;

  int driver_table = -1;  // storage table id scanned by the head LOOP
  std::vector<OutputColumn> output;

  bool operator==(const PipelineProgram&) const = default;
};

/// Shared hash table contract between a HASH_PUT and its HASH_PROBEs
/// (or one HASH_AGGREGATE). Capacity is fixed at plan assembly from
/// table metadata.
struct HashTableDescriptor {
  int id = -1;
  enum class Purpose : uint8_t { Join, Aggregation } purpose = Purpose::Join;
  HashTableImpl impl = HashTableImpl::LinearProbing;
  HashFunctionKind function = HashFunctionKind::Murmur;
  uint64_t seed = 0;
  int key_arity = 1;
  int build_pipeline = -1;  // index of the producing pipeline
  int build_table = -1;     // storage table id of the join build side
  bool operator==(const HashTableDescriptor&) const = default;
};

/// The point in variant space: execution strategy, data structures and
/// code transformations for one pipeline.
struct VariantConfiguration {
  Strategy strategy = Strategy::SinglePass;
  MemoryAccess memory_access = MemoryAccess::Sequential;
  PredicationMode predication = PredicationMode::Branched;
  HashTableImpl hash_table_impl = HashTableImpl::LinearProbing;
  HashFunctionKind hash_function = HashFunctionKind::Murmur;
  int thread_multiplier = 1;            // multi-pass projection
  int work_group_size = 16;             // aggregation
  int hash_table_count_multiplier = 1;  // local aggregation
  int unroll_factor = 1;

  bool operator==(const VariantConfiguration&) const = default;
  std::string to_string() const;
};

/// Admissible values per dimension (§ variant space).
inline constexpr int kThreadMultipliers[] = {1, 8, 64, 256, 1024, 16384, 65536};
inline constexpr int kWorkGroupSizes[] = {16, 32, 64, 128, 256, 512, 1024};
inline constexpr int kTableCountMultipliers[] = {1, 8, 64, 256, 1024, 16384, 65536};
inline constexpr int kUnrollFactors[] = {1, 2, 4};

}  // namespace hawk

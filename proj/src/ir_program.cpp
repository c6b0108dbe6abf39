#include "hawk/ir/program.hpp"

#include <sstream>

namespace hawk {

const char* to_string(PipelineKind k) {
  return k == PipelineKind::Projection ? "projection" : "aggregation";
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::SinglePass: return "single_pass";
    case Strategy::MultiPass: return "multi_pass";
    case Strategy::LocalHash: return "local_hash";
    case Strategy::GlobalHash: return "global_hash";
  }
  return "?";
}

const char* to_string(MemoryAccess m) {
  return m == MemoryAccess::Sequential ? "sequential" : "coalesced";
}

const char* to_string(PredicationMode p) {
  return p == PredicationMode::Branched ? "branched" : "predicated";
}

const char* to_string(HashTableImpl h) {
  return h == HashTableImpl::LinearProbing ? "linear_probing" : "cuckoo";
}

const char* to_string(HashFunctionKind h) {
  return h == HashFunctionKind::Murmur ? "murmur" : "multiply_shift";
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ne: return "<>";
  }
  return "?";
}

const char* to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

const char* to_string(AggFunction fn) {
  switch (fn) {
    case AggFunction::Sum: return "sum";
    case AggFunction::Count: return "count";
    case AggFunction::Min: return "min";
    case AggFunction::Max: return "max";
  }
  return "?";
}

const char* to_string(PipelineOpKind k) {
  switch (k) {
    case PipelineOpKind::Loop: return "LOOP";
    case PipelineOpKind::Filter: return "FILTER";
    case PipelineOpKind::HashPut: return "HASH_PUT";
    case PipelineOpKind::HashProbe: return "HASH_PROBE";
    case PipelineOpKind::CrossJoin: return "CROSS_JOIN";
    case PipelineOpKind::Arithmetic: return "ARITHMETIC";
    case PipelineOpKind::Aggregate: return "AGGREGATE";
    case PipelineOpKind::HashAggregate: return "HASH_AGGREGATE";
    case PipelineOpKind::Project: return "PROJECT";
  }
  return "?";
}

std::string VariantConfiguration::to_string() const {
  std::ostringstream os;
  os << hawk::to_string(strategy) << '/' << hawk::to_string(memory_access) << '/'
     << hawk::to_string(predication);
  if (strategy == Strategy::MultiPass) os << "/tm=" << thread_multiplier;
  if (strategy == Strategy::LocalHash || strategy == Strategy::GlobalHash) {
    os << '/' << hawk::to_string(hash_table_impl) << '/' << hawk::to_string(hash_function)
       << "/wg=" << work_group_size;
    if (strategy == Strategy::LocalHash) os << "/ht=" << hash_table_count_multiplier;
  }
  if (unroll_factor != 1) os << "/u=" << unroll_factor;
  return os.str();
}

}  // namespace hawk

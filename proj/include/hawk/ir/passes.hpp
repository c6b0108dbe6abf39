#pragma once

#include "hawk/ir/program.hpp"

namespace hawk {

/// Individual transformation passes. Each returns a new program; the
/// input is never modified.
PipelineProgram set_strategy(PipelineProgram program, Strategy strategy);
PipelineProgram set_memory_access(PipelineProgram program, MemoryAccess access);
PipelineProgram set_predication(PipelineProgram program, PredicationMode mode);
PipelineProgram set_hash_tables(PipelineProgram program, HashTableImpl impl,
                                HashFunctionKind function);
/// Replicates per-tuple op bodies `factor` times with access offsets
/// 0..factor-1 and sets the LOOP step. Runs last so the replicas inherit
/// the final modes.
PipelineProgram unroll(PipelineProgram program, int factor);

/// Runs the transformation passes in fixed order: strategy, memory
/// access, predication, hash tables, unrolling.
PipelineProgram apply_variant(const PipelineProgram& program, const VariantConfiguration& config);

/// Propagates the hash impl/function of each program's hash ops into the
/// shared descriptors (build and probe sides must agree).
void propagate_hash_choice(std::vector<HashTableDescriptor>& descriptors,
                           const PipelineProgram& program);

}  // namespace hawk

#pragma once

#include "hawk/ir/program.hpp"
#include "hawk/sql/plan.hpp"

namespace hawk {

/// A query partitioned into operator pipelines. Build pipelines come
/// first in dependency order; exactly one pipeline is terminal and
/// produces the query result.
struct PipelineSet {
  std::vector<PipelineProgram> pipelines;
  std::vector<HashTableDescriptor> descriptors;
  std::vector<TablePtr> tables;  // storage table id (== FROM index) -> table
  int terminal = -1;
};

/// Partitions a resolved logical plan into pipelines: every hash-join
/// build side becomes a build pipeline ending in HASH_PUT(+PROJECT of the
/// payload attributes); the probe-side pipeline carries FILTER /
/// HASH_PROBE / ARITHMETIC ops in consume order and ends in PROJECT,
/// AGGREGATE or HASH_AGGREGATE.
PipelineSet partition_into_pipelines(const sql::PlanPtr& plan,
                                     const std::vector<TablePtr>& tables);

/// Lowers one pipeline's ops (already in consume order) into a program
/// headed by LOOP over the driver table. Code-generation modes are left
/// at defaults; apply_variant sets them.
PipelineProgram lower_pipeline(std::vector<PipelineOp> ops, PipelineKind kind,
                               int driver_table, std::vector<OutputColumn> output);

}  // namespace hawk

#include "hawk/planner/pipelines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "hawk/error.hpp"

namespace hawk {

namespace {

using sql::PlanNode;
using sql::PlanPtr;

CompareOp translate(sql::CompareOp op) {
  switch (op) {
    case sql::CompareOp::Lt: return CompareOp::Lt;
    case sql::CompareOp::Le: return CompareOp::Le;
    case sql::CompareOp::Eq: return CompareOp::Eq;
    case sql::CompareOp::Ge: return CompareOp::Ge;
    case sql::CompareOp::Gt: return CompareOp::Gt;
    case sql::CompareOp::Ne: return CompareOp::Ne;
  }
  return CompareOp::Eq;
}

ArithOp translate(sql::BinOp op) {
  switch (op) {
    case sql::BinOp::Add: return ArithOp::Add;
    case sql::BinOp::Sub: return ArithOp::Sub;
    case sql::BinOp::Mul: return ArithOp::Mul;
    case sql::BinOp::Div: return ArithOp::Div;
  }
  return ArithOp::Add;
}

struct PlanShape {
  const PlanNode* project = nullptr;
  const PlanNode* aggregate = nullptr;
  std::vector<const PlanNode*> maps;          // derived id order (bottom-up)
  std::vector<const PlanNode*> post_selects;  // above the join tree, bottom-up
  std::vector<const PlanNode*> joins;         // innermost first
  const PlanNode* probe_scan = nullptr;
  const PlanNode* probe_select = nullptr;
  // per join (same order as `joins`): build scan + optional select
  struct BuildSide {
    const PlanNode* scan = nullptr;
    const PlanNode* select = nullptr;
  };
  std::vector<BuildSide> builds;
};

PlanShape analyze(const PlanPtr& plan) {
  PlanShape s;
  const PlanNode* node = plan.get();
  if (!node || node->kind != PlanNode::Kind::Project)
    throw UnsupportedPlan("plan must be rooted in Project");
  s.project = node;
  node = node->left.get();
  if (node && node->kind == PlanNode::Kind::Aggregate) {
    s.aggregate = node;
    node = node->left.get();
  }
  while (node && node->kind == PlanNode::Kind::Map) {
    s.maps.push_back(node);
    node = node->left.get();
  }
  std::reverse(s.maps.begin(), s.maps.end());  // bottom-up == derived id order
  while (node && node->kind == PlanNode::Kind::Select) {
    s.post_selects.push_back(node);
    node = node->left.get();
  }
  std::reverse(s.post_selects.begin(), s.post_selects.end());
  while (node && (node->kind == PlanNode::Kind::Join || node->kind == PlanNode::Kind::CrossJoin)) {
    s.joins.push_back(node);
    node = node->right.get();
  }
  std::reverse(s.joins.begin(), s.joins.end());  // innermost first
  if (node && node->kind == PlanNode::Kind::Select) {
    s.probe_select = node;
    node = node->left.get();
  }
  if (!node || node->kind != PlanNode::Kind::Scan)
    throw UnsupportedPlan("unexpected plan shape below joins");
  s.probe_scan = node;
  // post-selects collected above may actually belong to the probe scan in
  // join-free plans; analyze() is only called on parser output, where the
  // probe Select sits directly above the Scan.
  for (const PlanNode* j : s.joins) {
    PlanShape::BuildSide b;
    const PlanNode* l = j->left.get();
    if (l->kind == PlanNode::Kind::Select) {
      b.select = l;
      l = l->left.get();
    }
    if (l->kind != PlanNode::Kind::Scan)
      throw UnsupportedPlan("join build side must be a filtered scan");
    b.scan = l;
    s.builds.push_back(b);
  }
  return s;
}

class Lowering {
 public:
  Lowering(const PlanPtr& plan, const std::vector<TablePtr>& tables) : shape_(analyze(plan)) {
    bind_tables(tables);
  }

  PipelineSet run() {
    PipelineSet set;
    set.tables = bound_;

    // join build sides become build pipelines, innermost join first
    for (std::size_t j = 0; j < shape_.joins.size(); ++j) {
      const PlanNode* join = shape_.joins[j];
      if (join->kind == PlanNode::Kind::CrossJoin) continue;
      HashTableDescriptor desc;
      desc.id = static_cast<int>(set.descriptors.size());
      desc.purpose = HashTableDescriptor::Purpose::Join;
      desc.seed = 0x8f1bbcdcull + static_cast<uint64_t>(desc.id) * 0x2545f4914f6cdd1dull;
      desc.key_arity = 1;
      desc.build_table = join->left_key.table;
      desc.build_pipeline = static_cast<int>(set.pipelines.size());
      descriptor_of_table_[join->left_key.table] = desc.id;
      set.descriptors.push_back(desc);
      set.pipelines.push_back(build_pipeline(j, desc.id));
    }

    set.pipelines.push_back(terminal_pipeline(set));
    set.terminal = static_cast<int>(set.pipelines.size()) - 1;
    return set;
  }

 private:
  void bind_tables(const std::vector<TablePtr>& tables) {
    // FROM index -> table, resolved by scan name
    std::map<int, const PlanNode*> scans;
    scans[shape_.probe_scan->table] = shape_.probe_scan;
    for (const auto& b : shape_.builds) scans[b.scan->table] = b.scan;
    for (const PlanNode* j : shape_.joins)
      if (j->kind == PlanNode::Kind::CrossJoin) {
        const PlanNode* l = j->left.get();
        if (l->kind == PlanNode::Kind::Select) l = l->left.get();
        scans[l->table] = l;
      }
    int max_idx = scans.rbegin()->first;
    bound_.resize(static_cast<std::size_t>(max_idx) + 1);
    for (auto& [idx, scan] : scans) {
      auto it = std::find_if(tables.begin(), tables.end(), [&](const TablePtr& t) {
        return t->name() == scan->table_name;
      });
      if (it == tables.end()) throw UnknownTable("table '" + scan->table_name + "' not bound");
      bound_[static_cast<std::size_t>(idx)] = *it;
    }
  }

  // Columns of a build table referenced downstream of its HASH_PUT.
  std::vector<int> payload_columns(int table) const {
    std::set<int> cols;
    auto scan_attr = [&](const sql::AttrRef& a) {
      if (a.table == table) cols.insert(a.column);
    };
    std::function<void(const sql::ExprPtr&)> scan_expr = [&](const sql::ExprPtr& e) {
      if (!e) return;
      if (e->kind == sql::Expr::Kind::Attr) scan_attr(e->attr);
      scan_expr(e->lhs);
      scan_expr(e->rhs);
    };
    for (const PlanNode* m : shape_.maps) scan_expr(m->expr);
    for (const PlanNode* sel : shape_.post_selects)
      for (const auto& cmp : sel->predicate) {
        scan_attr(cmp.lhs);
        if (cmp.rhs_is_attr) scan_attr(cmp.rhs_attr);
      }
    if (shape_.aggregate) {
      for (const auto& k : shape_.aggregate->group_keys) scan_attr(k);
      for (const auto& a : shape_.aggregate->aggregates)
        if (a.has_input) scan_attr(a.input);
    }
    for (const auto& a : shape_.project->attrs) scan_attr(a);
    return {cols.begin(), cols.end()};
  }

  OpAttr driver_attr(const sql::AttrRef& a) const {
    OpAttr o;
    o.route = AttrRoute::Driver;
    o.table = a.table;
    o.column = a.column;
    o.kind = a.kind;
    o.name = a.name;
    return o;
  }

  // Routes an attribute reference for the terminal pipeline.
  OpAttr route_attr(const sql::AttrRef& a) const {
    if (a.table == sql::kDerivedTable) {
      OpAttr o;
      o.route = AttrRoute::Derived;
      o.column = derived_register_.at(a.column);
      o.kind = a.kind;
      o.name = a.name;
      return o;
    }
    if (a.table == shape_.probe_scan->table) return driver_attr(a);
    auto it = descriptor_of_table_.find(a.table);
    if (it != descriptor_of_table_.end()) {
      OpAttr o;
      o.route = AttrRoute::BuildPayload;
      o.table = a.table;
      o.column = a.column;
      o.descriptor = it->second;
      o.kind = a.kind;
      o.name = a.name;
      return o;
    }
    auto aux = aux_op_of_table_.find(a.table);
    if (aux != aux_op_of_table_.end()) {
      OpAttr o;
      o.route = AttrRoute::CrossAux;
      o.table = a.table;
      o.column = a.column;
      o.aux_op = aux->second;
      o.kind = a.kind;
      o.name = a.name;
      return o;
    }
    throw UnsupportedPlan("attribute '" + a.name + "' has no route");
  }

  OpOperand route_operand(const sql::AttrRef& a) const { return OpOperand::of_attr(route_attr(a)); }

  std::vector<OpComparison> translate_predicate(const std::vector<sql::Comparison>& pred,
                                                bool driver_only, int driver) const {
    std::vector<OpComparison> out;
    for (const auto& cmp : pred) {
      OpComparison oc;
      oc.op = translate(cmp.op);
      oc.lhs = driver_only && cmp.lhs.table == driver ? driver_attr(cmp.lhs) : route_attr(cmp.lhs);
      if (cmp.rhs_is_attr) {
        oc.rhs = driver_only && cmp.rhs_attr.table == driver
                     ? OpOperand::of_attr(driver_attr(cmp.rhs_attr))
                     : route_operand(cmp.rhs_attr);
      } else if (std::holds_alternative<int64_t>(cmp.rhs_literal)) {
        oc.rhs = OpOperand::of_int(std::get<int64_t>(cmp.rhs_literal));
      } else if (std::holds_alternative<double>(cmp.rhs_literal)) {
        oc.rhs = OpOperand::of_float(std::get<double>(cmp.rhs_literal));
      } else {
        // string literal: resolve against the column's lexicon; absent
        // strings map to -1 which compares unequal to every code
        const Column& col = bound_[static_cast<std::size_t>(cmp.lhs.table)]->column(
            static_cast<std::size_t>(cmp.lhs.column));
        oc.rhs = OpOperand::of_int(col.find_code(std::get<std::string>(cmp.rhs_literal)));
      }
      out.push_back(std::move(oc));
    }
    return out;
  }

  PipelineProgram build_pipeline(std::size_t join_idx, int descriptor) {
    const PlanNode* join = shape_.joins[join_idx];
    const PlanShape::BuildSide& side = shape_.builds[join_idx];
    const int t = side.scan->table;

    std::vector<PipelineOp> ops;
    PipelineOp loop;
    loop.kind = PipelineOpKind::Loop;
    loop.table = t;
    ops.push_back(loop);
    if (side.select) {
      PipelineOp f;
      f.kind = PipelineOpKind::Filter;
      f.predicate = translate_predicate(side.select->predicate, true, t);
      ops.push_back(f);
    }
    PipelineOp put;
    put.kind = PipelineOpKind::HashPut;
    put.descriptor = descriptor;
    put.keys = {driver_attr(join->left_key)};
    std::vector<OpAttr> payload;
    for (int col : payload_columns(t)) {
      sql::AttrRef a;
      a.table = t;
      a.column = col;
      const Table& table = *bound_[static_cast<std::size_t>(t)];
      a.kind = table.column(static_cast<std::size_t>(col)).kind();
      a.name = table.column_name(static_cast<std::size_t>(col));
      payload.push_back(driver_attr(a));
    }
    put.payload = payload;
    ops.push_back(put);

    PipelineOp project;
    project.kind = PipelineOpKind::Project;
    project.attrs = put.keys;
    for (const auto& p : payload)
      if (!(p == put.keys[0])) project.attrs.push_back(p);
    ops.push_back(project);

    std::vector<OutputColumn> output;
    for (std::size_t i = 0; i < project.attrs.size(); ++i) {
      const OpAttr& a = project.attrs[i];
      OutputColumn col;
      col.name = a.name;
      col.kind = a.kind;
      col.source = OutputColumn::Source::ProjectAttr;
      col.index = static_cast<int>(i);
      if (a.kind == ColumnKind::String) {
        col.lexicon_table = a.table;
        col.lexicon_column = a.column;
      }
      output.push_back(col);
    }
    return lower_pipeline(std::move(ops), PipelineKind::Projection, t, std::move(output));
  }

  PipelineProgram terminal_pipeline(PipelineSet& set) {
    const int driver = shape_.probe_scan->table;
    std::vector<PipelineOp> ops;
    PipelineOp loop;
    loop.kind = PipelineOpKind::Loop;
    loop.table = driver;
    ops.push_back(loop);

    if (shape_.probe_select) {
      PipelineOp f;
      f.kind = PipelineOpKind::Filter;
      f.predicate = translate_predicate(shape_.probe_select->predicate, true, driver);
      ops.push_back(f);
    }

    // probes / cross joins, innermost join first
    std::size_t desc_cursor = 0;
    for (const PlanNode* join : shape_.joins) {
      if (join->kind == PlanNode::Kind::CrossJoin) {
        const PlanNode* l = join->left.get();
        if (l->kind == PlanNode::Kind::Select) l = l->left.get();
        PipelineOp cj;
        cj.kind = PipelineOpKind::CrossJoin;
        cj.table = l->table;
        aux_op_of_table_[l->table] = static_cast<int>(ops.size());
        ops.push_back(cj);
        // aux-side filters run against the nested loop
        if (join->left->kind == PlanNode::Kind::Select) {
          PipelineOp f;
          f.kind = PipelineOpKind::Filter;
          f.predicate = translate_predicate(join->left->predicate, false, driver);
          ops.push_back(f);
        }
        continue;
      }
      PipelineOp probe;
      probe.kind = PipelineOpKind::HashProbe;
      probe.descriptor = static_cast<int>(desc_cursor);
      probe.keys = {route_attr(join->right_key)};
      ++desc_cursor;
      ops.push_back(probe);
    }

    for (const PlanNode* sel : shape_.post_selects) {
      PipelineOp f;
      f.kind = PipelineOpKind::Filter;
      f.predicate = translate_predicate(sel->predicate, false, driver);
      ops.push_back(f);
    }

    for (const PlanNode* m : shape_.maps) lower_expr_tree(m, ops);

    std::vector<OutputColumn> output;
    if (shape_.aggregate) {
      ops.push_back(aggregate_op(set, output));
    } else {
      PipelineOp project;
      project.kind = PipelineOpKind::Project;
      for (std::size_t i = 0; i < shape_.project->attrs.size(); ++i) {
        const sql::AttrRef& a = shape_.project->attrs[i];
        OpAttr routed = route_attr(a);
        OutputColumn col;
        col.name = shape_.project->names[i];
        col.kind = routed.kind;
        col.source = OutputColumn::Source::ProjectAttr;
        col.index = static_cast<int>(project.attrs.size());
        if (routed.kind == ColumnKind::String) {
          col.lexicon_table = routed.table;
          col.lexicon_column = routed.column;
        }
        project.attrs.push_back(routed);
        output.push_back(col);
      }
      ops.push_back(project);
    }

    PipelineKind kind = shape_.aggregate ? PipelineKind::Aggregation : PipelineKind::Projection;
    return lower_pipeline(std::move(ops), kind, driver, std::move(output));
  }

  // Decomposes a Map's expression tree into a sequence of binary
  // ARITHMETIC ops; interior nodes get fresh registers.
  void lower_expr_tree(const PlanNode* map, std::vector<PipelineOp>& ops) {
    std::function<OpOperand(const sql::ExprPtr&)> lower = [&](const sql::ExprPtr& e) -> OpOperand {
      switch (e->kind) {
        case sql::Expr::Kind::Attr: return route_operand(e->attr);
        case sql::Expr::Kind::IntLit: return OpOperand::of_int(e->ival);
        case sql::Expr::Kind::FloatLit: return OpOperand::of_float(e->fval);
        case sql::Expr::Kind::Binary: {
          OpOperand lhs = lower(e->lhs);
          OpOperand rhs = lower(e->rhs);
          PipelineOp arith;
          arith.kind = PipelineOpKind::Arithmetic;
          arith.arith_op = translate(e->op);
          arith.arith_lhs = lhs;
          arith.arith_rhs = rhs;
          arith.derived_id = next_register_++;
          arith.derived_kind = e->result_kind();
          ops.push_back(arith);
          OpAttr out;
          out.route = AttrRoute::Derived;
          out.column = arith.derived_id;
          out.kind = arith.derived_kind;
          out.name = "expr" + std::to_string(arith.derived_id);
          return OpOperand::of_attr(out);
        }
      }
      throw UnsupportedPlan("bad expression");
    };
    OpOperand result = lower(map->expr);
    if (result.kind != OpOperand::Kind::Attr || result.attr.route != AttrRoute::Derived)
      throw UnsupportedPlan("Map expression must be non-trivial");
    derived_register_[map->derived_id] = result.attr.column;
  }

  PipelineOp aggregate_op(PipelineSet& set, std::vector<OutputColumn>& output) {
    const PlanNode* agg = shape_.aggregate;
    PipelineOp op;
    std::vector<int> agg_index;     // plan aggregate -> lowered index (sum for AVG)
    std::vector<int> avg_count_ix;  // plan aggregate -> count index (AVG only)

    auto add_lowered = [&](AggFunction fn, const sql::AggItem& item, ColumnKind out_kind,
                           const std::string& name) {
      OpAggregate lowered;
      lowered.fn = fn;
      if (fn != AggFunction::Count) lowered.input = route_operand(item.input);
      lowered.out_kind = out_kind;
      lowered.name = name;
      op.aggregates.push_back(lowered);
      return static_cast<int>(op.aggregates.size()) - 1;
    };

    for (const auto& item : agg->aggregates) {
      switch (item.fn) {
        case sql::AggFn::Sum:
          agg_index.push_back(add_lowered(AggFunction::Sum, item, item.input.kind, item.output_name));
          avg_count_ix.push_back(-1);
          break;
        case sql::AggFn::Count:
          agg_index.push_back(add_lowered(AggFunction::Count, item, ColumnKind::Int64, item.output_name));
          avg_count_ix.push_back(-1);
          break;
        case sql::AggFn::Min:
          agg_index.push_back(add_lowered(AggFunction::Min, item, item.input.kind, item.output_name));
          avg_count_ix.push_back(-1);
          break;
        case sql::AggFn::Max:
          agg_index.push_back(add_lowered(AggFunction::Max, item, item.input.kind, item.output_name));
          avg_count_ix.push_back(-1);
          break;
        case sql::AggFn::Avg: {
          // AVG lowers to SUM + COUNT with a host-side division
          int sum = add_lowered(AggFunction::Sum, item, item.input.kind, item.output_name + ".sum");
          sql::AggItem count_item;
          int count = add_lowered(AggFunction::Count, count_item, ColumnKind::Int64,
                                  item.output_name + ".count");
          agg_index.push_back(sum);
          avg_count_ix.push_back(count);
          break;
        }
      }
    }

    if (agg->group_keys.empty()) {
      op.kind = PipelineOpKind::Aggregate;
      // hidden row counter so the runtime can detect empty inputs
      bool has_count = std::any_of(op.aggregates.begin(), op.aggregates.end(),
                                   [](const OpAggregate& a) { return a.fn == AggFunction::Count; });
      if (!has_count) {
        OpAggregate hidden;
        hidden.fn = AggFunction::Count;
        hidden.out_kind = ColumnKind::Int64;
        hidden.name = ".rows";
        op.aggregates.push_back(hidden);
      }
    } else {
      op.kind = PipelineOpKind::HashAggregate;
      for (const auto& k : agg->group_keys) op.keys.push_back(route_attr(k));
      HashTableDescriptor desc;
      desc.id = static_cast<int>(set.descriptors.size());
      desc.purpose = HashTableDescriptor::Purpose::Aggregation;
      desc.seed = 0x6a09e667f3bcc909ull + static_cast<uint64_t>(desc.id);
      desc.key_arity = static_cast<int>(op.keys.size());
      desc.build_pipeline = static_cast<int>(set.pipelines.size());
      op.descriptor = desc.id;
      set.descriptors.push_back(desc);
    }

    // output schema in SELECT order
    for (std::size_t i = 0; i < shape_.project->attrs.size(); ++i) {
      const sql::AttrRef& a = shape_.project->attrs[i];
      OutputColumn col;
      col.name = shape_.project->names[i];
      if (a.table == sql::kAggOutput) {
        const std::size_t plan_ix = static_cast<std::size_t>(a.column);
        if (agg->aggregates[plan_ix].fn == sql::AggFn::Avg) {
          col.source = OutputColumn::Source::AvgDivide;
          col.kind = ColumnKind::Float64;
          col.index = agg_index[plan_ix];
          col.index2 = avg_count_ix[plan_ix];
        } else {
          col.source = OutputColumn::Source::Aggregate;
          col.kind = op.aggregates[static_cast<std::size_t>(agg_index[plan_ix])].out_kind;
          col.index = agg_index[plan_ix];
        }
      } else {
        OpAttr routed = route_attr(a);
        col.source = OutputColumn::Source::GroupKey;
        col.kind = routed.kind;
        for (std::size_t k = 0; k < op.keys.size(); ++k)
          if (op.keys[k] == routed) col.index = static_cast<int>(k);
        if (routed.kind == ColumnKind::String) {
          col.lexicon_table = routed.table;
          col.lexicon_column = routed.column;
        }
      }
      output.push_back(col);
    }
    return op;
  }

  PlanShape shape_;
  std::vector<TablePtr> bound_;
  std::map<int, int> descriptor_of_table_;  // FROM index -> descriptor id
  std::map<int, int> aux_op_of_table_;      // FROM index -> CROSS_JOIN op index
  std::map<int, int> derived_register_;     // plan derived id -> register
  int next_register_ = 0;
};

}  // namespace

PipelineSet partition_into_pipelines(const sql::PlanPtr& plan,
                                     const std::vector<TablePtr>& tables) {
  Lowering lowering(plan, tables);
  return lowering.run();
}

PipelineProgram lower_pipeline(std::vector<PipelineOp> ops, PipelineKind kind,
                               int driver_table, std::vector<OutputColumn> output) {
  if (ops.empty()) throw UnsupportedPlan("empty pipeline");
  if (ops.front().kind != PipelineOpKind::Loop)
    throw UnsupportedPlan("pipeline must start with LOOP");
  PipelineProgram program;
  program.ops = std::move(ops);
  program.driver_table = driver_table;
  program.output = std::move(output);
  const PipelineOpKind last = program.ops.back().kind;
  program.kind = (last == PipelineOpKind::Aggregate || last == PipelineOpKind::HashAggregate)
                     ? PipelineKind::Aggregation
                     : PipelineKind::Projection;
  if (program.kind != kind) throw UnsupportedPlan("pipeline kind mismatch");
  program.strategy =
      program.kind == PipelineKind::Projection ? Strategy::SinglePass : Strategy::LocalHash;
  return program;
}

}  // namespace hawk

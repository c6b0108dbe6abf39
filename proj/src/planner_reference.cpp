#include "hawk/planner/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>

#include "hawk/error.hpp"

namespace hawk {

namespace {

using sql::PlanNode;
using sql::PlanPtr;

// Intermediate tuples carry one row index per FROM table plus derived
// values; attribute loads go back to the base columns.
struct RefRow {
  std::vector<int64_t> row;  // per FROM table, -1 when absent
  std::vector<Value> derived;
};

int64_t wrap_add(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
int64_t wrap_sub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}
int64_t wrap_mul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}

class Reference {
 public:
  Reference(const PlanPtr& plan, const std::vector<TablePtr>& tables) : plan_(plan) {
    // bind FROM indices by scan name
    std::function<void(const PlanPtr&)> bind = [&](const PlanPtr& node) {
      if (!node) return;
      if (node->kind == PlanNode::Kind::Scan) {
        if (static_cast<std::size_t>(node->table) >= bound_.size())
          bound_.resize(static_cast<std::size_t>(node->table) + 1);
        auto it = std::find_if(tables.begin(), tables.end(), [&](const TablePtr& t) {
          return t->name() == node->table_name;
        });
        if (it == tables.end()) throw UnknownTable("table '" + node->table_name + "' not bound");
        bound_[static_cast<std::size_t>(node->table)] = *it;
      }
      bind(node->left);
      bind(node->right);
    };
    bind(plan);
  }

  Table run() {
    if (plan_->kind != PlanNode::Kind::Project)
      throw UnsupportedPlan("plan must be rooted in Project");
    const PlanNode* below = plan_->left.get();
    if (below->kind == PlanNode::Kind::Aggregate) {
      std::vector<RefRow> input = eval(below->left);
      return aggregate(*below, input);
    }
    std::vector<RefRow> rows = eval(plan_->left);
    return project(rows);
  }

 private:
  Value load(const RefRow& r, const sql::AttrRef& a) const {
    if (a.table == sql::kDerivedTable) return r.derived[static_cast<std::size_t>(a.column)];
    const Table& t = *bound_[static_cast<std::size_t>(a.table)];
    return t.column(static_cast<std::size_t>(a.column))
        .value_at(static_cast<std::size_t>(r.row[static_cast<std::size_t>(a.table)]));
  }

  static bool compare(const Value& lhs, sql::CompareOp op, const Value& rhs) {
    auto apply = [&](auto a, auto b) {
      switch (op) {
        case sql::CompareOp::Lt: return a < b;
        case sql::CompareOp::Le: return a <= b;
        case sql::CompareOp::Eq: return a == b;
        case sql::CompareOp::Ge: return a >= b;
        case sql::CompareOp::Gt: return a > b;
        case sql::CompareOp::Ne: return a != b;
      }
      return false;
    };
    if (std::holds_alternative<int64_t>(lhs) && std::holds_alternative<int64_t>(rhs))
      return apply(std::get<int64_t>(lhs), std::get<int64_t>(rhs));
    if (std::holds_alternative<double>(lhs) && std::holds_alternative<double>(rhs))
      return apply(std::get<double>(lhs), std::get<double>(rhs));
    if (std::holds_alternative<std::string>(lhs) && std::holds_alternative<std::string>(rhs))
      return apply(std::get<std::string>(lhs), std::get<std::string>(rhs));
    throw TypeError("mismatched comparison operand types");
  }

  bool matches(const RefRow& r, const std::vector<sql::Comparison>& pred) const {
    for (const auto& cmp : pred) {
      Value lhs = load(r, cmp.lhs);
      Value rhs = cmp.rhs_is_attr ? load(r, cmp.rhs_attr) : cmp.rhs_literal;
      if (!compare(lhs, cmp.op, rhs)) return false;
    }
    return true;
  }

  Value eval_expr(const RefRow& r, const sql::Expr& e) const {
    switch (e.kind) {
      case sql::Expr::Kind::Attr: return load(r, e.attr);
      case sql::Expr::Kind::IntLit: return e.ival;
      case sql::Expr::Kind::FloatLit: return e.fval;
      case sql::Expr::Kind::Binary: {
        Value a = eval_expr(r, *e.lhs);
        Value b = eval_expr(r, *e.rhs);
        const bool as_float =
            std::holds_alternative<double>(a) || std::holds_alternative<double>(b);
        if (as_float) {
          double x = std::holds_alternative<double>(a)
                         ? std::get<double>(a)
                         : static_cast<double>(std::get<int64_t>(a));
          double y = std::holds_alternative<double>(b)
                         ? std::get<double>(b)
                         : static_cast<double>(std::get<int64_t>(b));
          switch (e.op) {
            case sql::BinOp::Add: return x + y;
            case sql::BinOp::Sub: return x - y;
            case sql::BinOp::Mul: return x * y;
            case sql::BinOp::Div: return x / y;
          }
        }
        int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
        switch (e.op) {
          case sql::BinOp::Add: return wrap_add(x, y);
          case sql::BinOp::Sub: return wrap_sub(x, y);
          case sql::BinOp::Mul: return wrap_mul(x, y);
          case sql::BinOp::Div: return y == 0 ? int64_t{0} : x / y;  // x/0 defined as 0
        }
        return int64_t{0};
      }
    }
    return int64_t{0};
  }

  std::vector<RefRow> eval(const PlanPtr& node) {
    switch (node->kind) {
      case PlanNode::Kind::Scan: {
        const Table& t = *bound_[static_cast<std::size_t>(node->table)];
        std::vector<RefRow> rows;
        rows.reserve(t.row_count());
        for (std::size_t i = 0; i < t.row_count(); ++i) {
          RefRow r;
          r.row.assign(bound_.size(), -1);
          r.row[static_cast<std::size_t>(node->table)] = static_cast<int64_t>(i);
          rows.push_back(std::move(r));
        }
        return rows;
      }
      case PlanNode::Kind::Select: {
        std::vector<RefRow> rows = eval(node->left);
        std::vector<RefRow> out;
        for (auto& r : rows)
          if (matches(r, node->predicate)) out.push_back(std::move(r));
        return out;
      }
      case PlanNode::Kind::Join: {
        std::vector<RefRow> build = eval(node->left);
        std::vector<RefRow> probe = eval(node->right);
        const int bt = node->left_key.table;
        std::unordered_map<int64_t, std::size_t> map;
        map.reserve(build.size() * 2);
        for (std::size_t i = 0; i < build.size(); ++i) {
          int64_t key = std::get<int64_t>(load(build[i], node->left_key));
          if (!map.emplace(key, i).second)
            throw DuplicateKey("duplicate join build key " + std::to_string(key) +
                               " (join build sides must be key-unique)");
        }
        std::vector<RefRow> out;
        for (auto& r : probe) {
          int64_t key = std::get<int64_t>(load(r, node->right_key));
          auto it = map.find(key);
          if (it == map.end()) continue;
          RefRow joined = r;
          joined.row[static_cast<std::size_t>(bt)] =
              build[it->second].row[static_cast<std::size_t>(bt)];
          out.push_back(std::move(joined));
        }
        return out;
      }
      case PlanNode::Kind::CrossJoin: {
        std::vector<RefRow> aux = eval(node->left);
        std::vector<RefRow> probe = eval(node->right);
        // the aux side is a scan (+select) of one table
        int at = -1;
        for (std::size_t t = 0; t < bound_.size(); ++t)
          if (!aux.empty() && aux[0].row[t] >= 0) at = static_cast<int>(t);
        std::vector<RefRow> out;
        for (const auto& r : probe)
          for (const auto& a : aux) {
            RefRow joined = r;
            joined.row[static_cast<std::size_t>(at)] = a.row[static_cast<std::size_t>(at)];
            out.push_back(std::move(joined));
          }
        return out;
      }
      case PlanNode::Kind::Map: {
        std::vector<RefRow> rows = eval(node->left);
        for (auto& r : rows) {
          if (static_cast<int>(r.derived.size()) <= node->derived_id)
            r.derived.resize(static_cast<std::size_t>(node->derived_id) + 1);
          r.derived[static_cast<std::size_t>(node->derived_id)] = eval_expr(r, *node->expr);
        }
        return rows;
      }
      default:
        throw UnsupportedPlan("unexpected node in reference evaluation");
    }
  }

  Table project(const std::vector<RefRow>& rows) {
    Schema schema;
    for (std::size_t i = 0; i < plan_->attrs.size(); ++i)
      schema.push_back({plan_->names[i], plan_->attrs[i].kind});
    Table out("result", schema);
    Row values;
    for (const auto& r : rows) {
      values.clear();
      for (const auto& a : plan_->attrs) values.push_back(load(r, a));
      out.append_row(values);
    }
    out.finalize();
    return out;
  }

  struct Accumulator {
    int64_t isum = 0;
    double fsum = 0;
    int64_t count = 0;
    int64_t imin = INT64_MAX, imax = INT64_MIN;
    double fmin = HUGE_VAL, fmax = -HUGE_VAL;
  };

  Table aggregate(const PlanNode& agg, const std::vector<RefRow>& rows) {
    std::map<std::vector<Value>, std::vector<Accumulator>> groups;
    for (const auto& r : rows) {
      std::vector<Value> key;
      key.reserve(agg.group_keys.size());
      for (const auto& k : agg.group_keys) key.push_back(load(r, k));
      auto [it, fresh] =
          groups.try_emplace(std::move(key), std::vector<Accumulator>(agg.aggregates.size()));
      for (std::size_t i = 0; i < agg.aggregates.size(); ++i) {
        const sql::AggItem& item = agg.aggregates[i];
        Accumulator& acc = it->second[i];
        ++acc.count;
        if (!item.has_input) continue;
        Value v = load(r, item.input);
        if (std::holds_alternative<int64_t>(v)) {
          int64_t x = std::get<int64_t>(v);
          acc.isum = wrap_add(acc.isum, x);
          acc.imin = std::min(acc.imin, x);
          acc.imax = std::max(acc.imax, x);
        } else {
          double x = std::get<double>(v);
          acc.fsum += x;
          acc.fmin = std::min(acc.fmin, x);
          acc.fmax = std::max(acc.fmax, x);
        }
      }
    }

    const bool grouped = !agg.group_keys.empty();
    if (!grouped && groups.empty()) {
      // SUM=0 / COUNT=0 convention; MIN/MAX/AVG are errors on empty input
      for (const auto& item : agg.aggregates)
        if (item.fn == sql::AggFn::Min || item.fn == sql::AggFn::Max ||
            item.fn == sql::AggFn::Avg)
          throw EmptyAggregate(std::string(to_string(item.fn)) +
                               " over empty input has no value");
      groups.try_emplace({}, std::vector<Accumulator>(agg.aggregates.size()));
    }

    Schema schema;
    for (std::size_t i = 0; i < plan_->attrs.size(); ++i)
      schema.push_back({plan_->names[i], plan_->attrs[i].kind});
    Table out("result", schema);
    Row values;
    for (const auto& [key, accs] : groups) {
      values.clear();
      for (std::size_t i = 0; i < plan_->attrs.size(); ++i) {
        const sql::AttrRef& a = plan_->attrs[i];
        if (a.table == sql::kAggOutput) {
          const std::size_t ix = static_cast<std::size_t>(a.column);
          const sql::AggItem& item = agg.aggregates[ix];
          const Accumulator& acc = accs[ix];
          const bool is_float = item.has_input && item.input.kind == ColumnKind::Float64;
          switch (item.fn) {
            case sql::AggFn::Sum:
              values.push_back(is_float ? Value(acc.fsum) : Value(acc.isum));
              break;
            case sql::AggFn::Count: values.push_back(acc.count); break;
            case sql::AggFn::Min:
              values.push_back(is_float ? Value(acc.fmin) : Value(acc.imin));
              break;
            case sql::AggFn::Max:
              values.push_back(is_float ? Value(acc.fmax) : Value(acc.imax));
              break;
            case sql::AggFn::Avg: {
              double sum = is_float ? acc.fsum : static_cast<double>(acc.isum);
              values.push_back(sum / static_cast<double>(acc.count));
              break;
            }
          }
        } else {
          // group key: position in the key tuple
          std::size_t pos = 0;
          for (std::size_t k = 0; k < agg.group_keys.size(); ++k)
            if (agg.group_keys[k] == a) pos = k;
          values.push_back(key[pos]);
        }
      }
      out.append_row(values);
    }
    out.finalize();
    return out;
  }

  PlanPtr plan_;
  std::vector<TablePtr> bound_;
};

}  // namespace

Table reference_execute(const sql::PlanPtr& plan, const std::vector<TablePtr>& tables) {
  Reference ref(plan, tables);
  return ref.run();
}

}  // namespace hawk

#include <cctype>
#include <charconv>
#include <sstream>

#include "hawk/error.hpp"
#include "hawk/sql/parser.hpp"

namespace hawk::sql {

namespace {

std::string format_float(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  std::string s(buf, ptr);
  // keep float literals lexically float so they re-parse to FloatLit
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

const char* op_text(CompareOp op) {
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

// Gathers the pieces of a plan produced by parse_query. The tree shape is
// fixed: Project [Aggregate] [Select] Map* [Select] JoinChain(Scan [Select]).
struct Collector {
  std::vector<std::string> from;           // in FROM order
  std::vector<const PlanNode*> selects;    // every Select node
  std::vector<const PlanNode*> joins;      // outermost..innermost
  std::vector<const PlanNode*> maps;       // by derived id
  const PlanNode* aggregate = nullptr;
  const PlanNode* project = nullptr;
  bool multi_table = false;

  void walk(const PlanPtr& node) {
    switch (node->kind) {
      case PlanNode::Kind::Project:
        project = node.get();
        walk(node->left);
        break;
      case PlanNode::Kind::Aggregate:
        aggregate = node.get();
        walk(node->left);
        break;
      case PlanNode::Kind::Map:
        maps.push_back(node.get());
        walk(node->left);
        break;
      case PlanNode::Kind::Select:
        selects.push_back(node.get());
        walk(node->left);
        break;
      case PlanNode::Kind::Join:
      case PlanNode::Kind::CrossJoin:
        joins.push_back(node.get());
        walk(node->left);
        walk(node->right);
        break;
      case PlanNode::Kind::Scan:
        if (static_cast<std::size_t>(node->table) >= from.size())
          from.resize(static_cast<std::size_t>(node->table) + 1);
        from[static_cast<std::size_t>(node->table)] = node->table_name;
        break;
    }
  }
};

struct Renderer {
  bool qualified;

  std::string attr(const AttrRef& a, const Collector& c) const {
    if (a.table == kDerivedTable)
      return expr(*c.maps[c.maps.size() - 1 - static_cast<std::size_t>(a.column)]->expr, c);
    if (qualified && a.table >= 0) return c.from[static_cast<std::size_t>(a.table)] + "." + a.name;
    return a.name;
  }

  std::string expr(const Expr& e, const Collector& c) const {
    switch (e.kind) {
      case Expr::Kind::Attr: return attr(e.attr, c);
      case Expr::Kind::IntLit: return std::to_string(e.ival);
      case Expr::Kind::FloatLit: return format_float(e.fval);
      case Expr::Kind::Binary: {
        const char* op = e.op == BinOp::Add   ? "+"
                         : e.op == BinOp::Sub ? "-"
                         : e.op == BinOp::Mul ? "*"
                                              : "/";
        return "(" + expr(*e.lhs, c) + op + expr(*e.rhs, c) + ")";
      }
    }
    return "?";
  }

  std::string literal(const Value& v) const {
    if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
    if (std::holds_alternative<double>(v)) return format_float(std::get<double>(v));
    std::string out = "'";
    for (char ch : std::get<std::string>(v)) {
      if (ch == '\'') out += "''";
      else out += ch;
    }
    return out + "'";
  }

  std::string comparison(const Comparison& cmp, const Collector& c) const {
    std::string rhs = cmp.rhs_is_attr ? attr(cmp.rhs_attr, c) : literal(cmp.rhs_literal);
    return attr(cmp.lhs, c) + op_text(cmp.op) + rhs;
  }
};

bool is_identifier(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

}  // namespace

std::string unparse(const PlanPtr& plan) {
  Collector c;
  c.walk(plan);
  if (!c.project) throw UnsupportedPlan("plan has no Project root");
  c.multi_table = c.from.size() > 1;
  Renderer r{c.multi_table};

  Renderer plain{false};  // unqualified renderer for synthesized names
  std::ostringstream sql;
  sql << "select ";
  for (std::size_t i = 0; i < c.project->attrs.size(); ++i) {
    if (i) sql << ", ";
    const AttrRef& a = c.project->attrs[i];
    const std::string& name = c.project->names[i];
    std::string body, synthesized;
    if (a.table == kAggOutput) {
      const AggItem& item = c.aggregate->aggregates[static_cast<std::size_t>(a.column)];
      if (item.has_input) {
        body = std::string(to_string(item.fn)) + "(" + r.attr(item.input, c) + ")";
        synthesized = std::string(to_string(item.fn)) + "(" + plain.attr(item.input, c) + ")";
      } else {
        body = "count(*)";
        synthesized = body;
      }
    } else if (a.table == kDerivedTable) {
      body = r.attr(a, c);
      synthesized = plain.attr(a, c);
    } else {
      body = r.attr(a, c);
      synthesized = a.name;
    }
    sql << body;
    // emit AS only for genuine aliases; reparsing synthesizes the rest
    if (name != synthesized && is_identifier(name)) sql << " as " << name;
  }

  sql << " from ";
  for (std::size_t i = 0; i < c.from.size(); ++i) {
    if (i) sql << ", ";
    sql << c.from[i];
  }

  std::vector<std::string> conjuncts;
  // join keys first (innermost join first) so re-parsing picks the same edges
  for (auto it = c.joins.rbegin(); it != c.joins.rend(); ++it) {
    const PlanNode* j = *it;
    if (j->kind == PlanNode::Kind::Join)
      conjuncts.push_back(r.attr(j->left_key, c) + "=" + r.attr(j->right_key, c));
  }
  for (auto it = c.selects.rbegin(); it != c.selects.rend(); ++it)
    for (const auto& cmp : (*it)->predicate) conjuncts.push_back(r.comparison(cmp, c));
  if (!conjuncts.empty()) {
    sql << " where ";
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
      if (i) sql << " and ";
      sql << conjuncts[i];
    }
  }

  if (c.aggregate && !c.aggregate->group_keys.empty()) {
    sql << " group by ";
    for (std::size_t i = 0; i < c.aggregate->group_keys.size(); ++i) {
      if (i) sql << ", ";
      sql << r.attr(c.aggregate->group_keys[i], c);
    }
  }
  return sql.str();
}

std::string render(const Expr& e) {
  // unqualified rendering used for synthesized output names
  switch (e.kind) {
    case Expr::Kind::Attr: return e.attr.name;
    case Expr::Kind::IntLit: return std::to_string(e.ival);
    case Expr::Kind::FloatLit: return format_float(e.fval);
    case Expr::Kind::Binary: {
      const char* op = e.op == BinOp::Add   ? "+"
                       : e.op == BinOp::Sub ? "-"
                       : e.op == BinOp::Mul ? "*"
                                            : "/";
      return "(" + render(*e.lhs) + op + render(*e.rhs) + ")";
    }
  }
  return "?";
}

std::string dump(const PlanPtr& plan) {
  std::ostringstream os;
  struct {
    std::ostringstream& os;
    void visit(const PlanPtr& node, int depth) {
      if (!node) return;
      os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
      switch (node->kind) {
        case PlanNode::Kind::Scan: os << "Scan(" << node->table_name << ")"; break;
        case PlanNode::Kind::Select: os << "Select(" << node->predicate.size() << " conjuncts)"; break;
        case PlanNode::Kind::Join:
          os << "Join(" << node->left_key.name << "=" << node->right_key.name << ")";
          break;
        case PlanNode::Kind::CrossJoin: os << "CrossJoin"; break;
        case PlanNode::Kind::Map: os << "Map(" << node->output_name << ")"; break;
        case PlanNode::Kind::Aggregate:
          os << "Aggregate(keys=" << node->group_keys.size()
             << ", aggs=" << node->aggregates.size() << ")";
          break;
        case PlanNode::Kind::Project: os << "Project(" << node->attrs.size() << " attrs)"; break;
      }
      os << '\n';
      visit(node->left, depth + 1);
      visit(node->right, depth + 1);
    }
  } printer{os};
  printer.visit(plan, 0);
  return os.str();
}

}  // namespace hawk::sql

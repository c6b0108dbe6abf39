#include "hawk/sql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "hawk/error.hpp"

namespace hawk::sql {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok : uint8_t {
  Ident, Int, Float, String,
  LParen, RParen, Comma, Dot, Star, Plus, Minus, Slash,
  Lt, Le, Eq, Ge, Gt, Ne, Semicolon, End,
};

struct Token {
  Tok kind;
  std::string text;   // Ident (lowercased), String (unescaped), numbers (raw)
  std::size_t pos = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::Ident, lower(text.substr(i, j - i)), start});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool is_float = false;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '.') {
        is_float = true;
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        is_float = true;
        ++j;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      out.push_back({is_float ? Tok::Float : Tok::Int, text.substr(i, j - i), start});
      i = j;
      continue;
    }
    if (c == '\'') {
      std::string s;
      std::size_t j = i + 1;
      while (true) {
        if (j >= n) throw SyntaxError(start, "unterminated string literal");
        if (text[j] == '\'') {
          if (j + 1 < n && text[j + 1] == '\'') {
            s.push_back('\'');
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        s.push_back(text[j]);
        ++j;
      }
      out.push_back({Tok::String, s, start});
      i = j;
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < n && text[i + 1] == b; };
    if (two('<', '=')) { out.push_back({Tok::Le, "<=", start}); i += 2; continue; }
    if (two('>', '=')) { out.push_back({Tok::Ge, ">=", start}); i += 2; continue; }
    if (two('<', '>')) { out.push_back({Tok::Ne, "<>", start}); i += 2; continue; }
    if (two('!', '=')) { out.push_back({Tok::Ne, "<>", start}); i += 2; continue; }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", start}); break;
      case ')': out.push_back({Tok::RParen, ")", start}); break;
      case ',': out.push_back({Tok::Comma, ",", start}); break;
      case '.': out.push_back({Tok::Dot, ".", start}); break;
      case '*': out.push_back({Tok::Star, "*", start}); break;
      case '+': out.push_back({Tok::Plus, "+", start}); break;
      case '-': out.push_back({Tok::Minus, "-", start}); break;
      case '/': out.push_back({Tok::Slash, "/", start}); break;
      case '<': out.push_back({Tok::Lt, "<", start}); break;
      case '>': out.push_back({Tok::Gt, ">", start}); break;
      case '=': out.push_back({Tok::Eq, "=", start}); break;
      case ';': out.push_back({Tok::Semicolon, ";", start}); break;
      default:
        throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", n});
  return out;
}

// ---------------------------------------------------------------------------
// Raw AST (pre-resolution)
// ---------------------------------------------------------------------------

struct RawAttr {
  std::string table;  // empty when unqualified
  std::string column;
  std::size_t pos = 0;
};

struct RawExpr;
using RawExprPtr = std::shared_ptr<RawExpr>;
struct RawExpr {
  enum class Kind { Attr, Int, Float, Binary } kind = Kind::Int;
  RawAttr attr;
  int64_t ival = 0;
  double fval = 0.0;
  BinOp op = BinOp::Add;
  RawExprPtr lhs, rhs;
};

struct RawSelectItem {
  bool is_aggregate = false;
  AggFn fn = AggFn::Count;
  bool agg_star = false;  // COUNT(*)
  RawExprPtr expr;        // plain expr or aggregate input
  std::string alias;
};

struct RawComparison {
  CompareOp op = CompareOp::Eq;
  enum class Operand { Attr, Int, Float, String } lkind, rkind;
  RawAttr lattr, rattr;
  int64_t lint = 0, rint = 0;
  double lfloat = 0, rfloat = 0;
  std::string lstr, rstr;
  std::size_t pos = 0;
};

struct RawQuery {
  std::vector<RawSelectItem> select;
  std::vector<std::string> from;
  std::vector<RawComparison> where;
  std::vector<RawAttr> group_by;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  RawQuery parse() {
    RawQuery q;
    expect_keyword("select");
    q.select.push_back(select_item());
    while (accept(Tok::Comma)) q.select.push_back(select_item());
    expect_keyword("from");
    q.from.push_back(expect(Tok::Ident).text);
    while (accept(Tok::Comma)) q.from.push_back(expect(Tok::Ident).text);
    if (accept_keyword("where")) {
      q.where.push_back(comparison());
      while (accept_keyword("and")) q.where.push_back(comparison());
    }
    if (accept_keyword("group")) {
      expect_keyword("by");
      q.group_by.push_back(attr());
      while (accept(Tok::Comma)) q.group_by.push_back(attr());
    }
    accept(Tok::Semicolon);
    if (peek().kind != Tok::End)
      throw SyntaxError(peek().pos, "trailing input '" + peek().text + "'");
    return q;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }
  Token expect(Tok k) {
    if (peek().kind != k)
      throw SyntaxError(peek().pos, "unexpected token '" + peek().text + "'");
    return next();
  }
  bool peek_keyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  bool accept_keyword(const char* kw) {
    if (peek_keyword(kw)) { ++pos_; return true; }
    return false;
  }
  void expect_keyword(const char* kw) {
    if (!accept_keyword(kw))
      throw SyntaxError(peek().pos, std::string("expected '") + kw + "'");
  }

  static std::optional<AggFn> agg_fn(const std::string& name) {
    if (name == "sum") return AggFn::Sum;
    if (name == "count") return AggFn::Count;
    if (name == "min") return AggFn::Min;
    if (name == "max") return AggFn::Max;
    if (name == "avg") return AggFn::Avg;
    return std::nullopt;
  }

  RawSelectItem select_item() {
    RawSelectItem item;
    if (peek().kind == Tok::Ident) {
      auto fn = agg_fn(peek().text);
      if (fn && toks_[pos_ + 1].kind == Tok::LParen) {
        next();
        expect(Tok::LParen);
        item.is_aggregate = true;
        item.fn = *fn;
        if (peek().kind == Tok::Star) {
          next();
          item.agg_star = true;
        } else {
          item.expr = expression();
        }
        expect(Tok::RParen);
        if (accept_keyword("as")) item.alias = expect(Tok::Ident).text;
        return item;
      }
    }
    item.expr = expression();
    if (accept_keyword("as")) item.alias = expect(Tok::Ident).text;
    return item;
  }

  RawAttr attr() {
    RawAttr a;
    Token t = expect(Tok::Ident);
    a.pos = t.pos;
    if (accept(Tok::Dot)) {
      a.table = t.text;
      a.column = expect(Tok::Ident).text;
    } else {
      a.column = t.text;
    }
    return a;
  }

  RawExprPtr expression() {
    RawExprPtr e = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      BinOp op = next().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      auto node = std::make_shared<RawExpr>();
      node->kind = RawExpr::Kind::Binary;
      node->op = op;
      node->lhs = e;
      node->rhs = term();
      e = node;
    }
    return e;
  }

  RawExprPtr term() {
    RawExprPtr e = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      BinOp op = next().kind == Tok::Star ? BinOp::Mul : BinOp::Div;
      auto node = std::make_shared<RawExpr>();
      node->kind = RawExpr::Kind::Binary;
      node->op = op;
      node->lhs = e;
      node->rhs = factor();
      e = node;
    }
    return e;
  }

  RawExprPtr factor() {
    auto node = std::make_shared<RawExpr>();
    if (accept(Tok::LParen)) {
      node = nullptr;
      RawExprPtr inner = expression();
      expect(Tok::RParen);
      return inner;
    }
    bool negative = false;
    if (accept(Tok::Minus)) negative = true;
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      int64_t v = 0;
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      node->kind = RawExpr::Kind::Int;
      node->ival = negative ? -v : v;
      return node;
    }
    if (t.kind == Tok::Float) {
      next();
      node->kind = RawExpr::Kind::Float;
      node->fval = std::stod(t.text) * (negative ? -1.0 : 1.0);
      return node;
    }
    if (negative) throw SyntaxError(t.pos, "expected numeric literal after '-'");
    if (t.kind == Tok::Ident) {
      node->kind = RawExpr::Kind::Attr;
      node->attr = attr();
      return node;
    }
    throw SyntaxError(t.pos, "expected attribute, literal or '('");
  }

  RawComparison comparison() {
    RawComparison c;
    c.pos = peek().pos;
    operand(c.lkind, c.lattr, c.lint, c.lfloat, c.lstr);
    switch (next().kind) {
      case Tok::Lt: c.op = CompareOp::Lt; break;
      case Tok::Le: c.op = CompareOp::Le; break;
      case Tok::Eq: c.op = CompareOp::Eq; break;
      case Tok::Ge: c.op = CompareOp::Ge; break;
      case Tok::Gt: c.op = CompareOp::Gt; break;
      case Tok::Ne: c.op = CompareOp::Ne; break;
      default: throw SyntaxError(c.pos, "expected comparison operator");
    }
    operand(c.rkind, c.rattr, c.rint, c.rfloat, c.rstr);
    if (c.lkind != RawComparison::Operand::Attr && c.rkind != RawComparison::Operand::Attr)
      throw SyntaxError(c.pos, "comparison needs at least one attribute");
    return c;
  }

  void operand(RawComparison::Operand& kind, RawAttr& a, int64_t& iv, double& fv,
               std::string& sv) {
    const Token& t = peek();
    bool negative = false;
    if (t.kind == Tok::Minus) {
      next();
      negative = true;
    }
    const Token& u = peek();
    if (u.kind == Tok::Int) {
      next();
      std::from_chars(u.text.data(), u.text.data() + u.text.size(), iv);
      if (negative) iv = -iv;
      kind = RawComparison::Operand::Int;
      return;
    }
    if (u.kind == Tok::Float) {
      next();
      fv = std::stod(u.text) * (negative ? -1.0 : 1.0);
      kind = RawComparison::Operand::Float;
      return;
    }
    if (negative) throw SyntaxError(u.pos, "expected numeric literal after '-'");
    if (u.kind == Tok::String) {
      next();
      sv = u.text;
      kind = RawComparison::Operand::String;
      return;
    }
    if (u.kind == Tok::Ident) {
      a = attr();
      kind = RawComparison::Operand::Attr;
      return;
    }
    throw SyntaxError(u.pos, "expected attribute or literal");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution and plan construction
// ---------------------------------------------------------------------------

class PlanBuilder {
 public:
  PlanBuilder(const RawQuery& q, const Catalog& catalog) : q_(q), catalog_(catalog) {}

  PlanPtr build() {
    resolve_from();
    auto where = resolve_where();
    auto [joins, table_filters, residual] = split_where(where);
    PlanPtr plan = build_join_tree(joins, table_filters);
    if (!residual.empty()) plan = make_select(plan, residual);
    plan = add_maps(plan);
    return add_root(plan);
  }

 private:
  struct JoinEdge {
    AttrRef a, b;
    bool used = false;
  };

  void resolve_from() {
    for (const auto& name : q_.from) {
      auto it = std::find_if(catalog_.begin(), catalog_.end(),
                             [&](const CatalogEntry& e) { return e.name == name; });
      if (it == catalog_.end()) throw UnknownTable("unknown table '" + name + "'");
      for (const auto& prev : from_)
        if (prev->name == name)
          throw UnknownTable("table '" + name + "' listed twice in FROM (self-joins unsupported)");
      from_.push_back(&*it);
    }
  }

  AttrRef resolve_attr(const RawAttr& raw) const {
    int table = -1, column = -1;
    if (!raw.table.empty()) {
      for (std::size_t t = 0; t < from_.size(); ++t)
        if (from_[t]->name == raw.table) {
          table = static_cast<int>(t);
          break;
        }
      if (table < 0) throw UnknownAttribute("unknown table qualifier '" + raw.table + "'");
      column = find_in(*from_[static_cast<std::size_t>(table)], raw.column);
      if (column < 0)
        throw UnknownAttribute("unknown attribute '" + raw.table + "." + raw.column + "'");
    } else {
      for (std::size_t t = 0; t < from_.size(); ++t) {
        int c = find_in(*from_[t], raw.column);
        if (c >= 0) {
          if (table >= 0)
            throw UnknownAttribute("attribute '" + raw.column + "' is ambiguous");
          table = static_cast<int>(t);
          column = c;
        }
      }
      if (table < 0) throw UnknownAttribute("unknown attribute '" + raw.column + "'");
    }
    AttrRef ref;
    ref.table = table;
    ref.column = column;
    ref.kind = from_[static_cast<std::size_t>(table)]->schema[static_cast<std::size_t>(column)].kind;
    ref.name = raw.column;
    return ref;
  }

  static int find_in(const CatalogEntry& e, const std::string& column) {
    for (std::size_t i = 0; i < e.schema.size(); ++i)
      if (e.schema[i].name == column) return static_cast<int>(i);
    return -1;
  }

  ExprPtr resolve_expr(const RawExprPtr& raw) const {
    auto node = std::make_shared<Expr>();
    switch (raw->kind) {
      case RawExpr::Kind::Attr:
        node->kind = Expr::Kind::Attr;
        node->attr = resolve_attr(raw->attr);
        if (node->attr.kind == ColumnKind::String)
          throw TypeError("string attribute '" + node->attr.name + "' in arithmetic expression");
        break;
      case RawExpr::Kind::Int:
        node->kind = Expr::Kind::IntLit;
        node->ival = raw->ival;
        break;
      case RawExpr::Kind::Float:
        node->kind = Expr::Kind::FloatLit;
        node->fval = raw->fval;
        break;
      case RawExpr::Kind::Binary:
        node->kind = Expr::Kind::Binary;
        node->op = raw->op;
        node->lhs = resolve_expr(raw->lhs);
        node->rhs = resolve_expr(raw->rhs);
        break;
    }
    return node;
  }

  static CompareOp mirror(CompareOp op) {
    switch (op) {
      case CompareOp::Lt: return CompareOp::Gt;
      case CompareOp::Le: return CompareOp::Ge;
      case CompareOp::Gt: return CompareOp::Lt;
      case CompareOp::Ge: return CompareOp::Le;
      default: return op;
    }
  }

  std::vector<Comparison> resolve_where() {
    std::vector<Comparison> out;
    for (const auto& raw : q_.where) {
      RawComparison c = raw;
      // normalize literal-on-left so every comparison has an attribute lhs
      if (c.lkind != RawComparison::Operand::Attr) {
        std::swap(c.lkind, c.rkind);
        std::swap(c.lattr, c.rattr);
        std::swap(c.lint, c.rint);
        std::swap(c.lfloat, c.rfloat);
        std::swap(c.lstr, c.rstr);
        c.op = mirror(c.op);
      }
      Comparison cmp;
      cmp.op = c.op;
      cmp.lhs = resolve_attr(c.lattr);
      switch (c.rkind) {
        case RawComparison::Operand::Attr: {
          cmp.rhs_is_attr = true;
          cmp.rhs_attr = resolve_attr(c.rattr);
          if (cmp.lhs.kind != cmp.rhs_attr.kind)
            throw TypeError("comparison between " + std::string(to_string(cmp.lhs.kind)) +
                            " and " + to_string(cmp.rhs_attr.kind));
          if (cmp.lhs.kind == ColumnKind::String)
            throw TypeError("attribute-to-attribute string comparisons are unsupported");
          break;
        }
        case RawComparison::Operand::Int:
          if (cmp.lhs.kind == ColumnKind::Float64)
            cmp.rhs_literal = static_cast<double>(c.rint);
          else if (cmp.lhs.kind == ColumnKind::Int64)
            cmp.rhs_literal = c.rint;
          else
            throw TypeError("comparison between string attribute '" + cmp.lhs.name +
                            "' and integer literal");
          break;
        case RawComparison::Operand::Float:
          if (cmp.lhs.kind != ColumnKind::Float64)
            throw TypeError("comparison between " + std::string(to_string(cmp.lhs.kind)) +
                            " attribute '" + cmp.lhs.name + "' and float literal");
          cmp.rhs_literal = c.rfloat;
          break;
        case RawComparison::Operand::String:
          if (cmp.lhs.kind != ColumnKind::String)
            throw TypeError("comparison between " + std::string(to_string(cmp.lhs.kind)) +
                            " attribute '" + cmp.lhs.name + "' and string literal");
          if (cmp.op != CompareOp::Eq && cmp.op != CompareOp::Ne)
            throw TypeError("string attributes support only = and <> comparisons");
          cmp.rhs_literal = c.rstr;
          break;
      }
      out.push_back(std::move(cmp));
    }
    return out;
  }

  // Splits WHERE into join edges (cross-table equalities), per-table
  // filters, and residual cross-table comparisons.
  std::tuple<std::vector<JoinEdge>, std::vector<std::vector<Comparison>>,
             std::vector<Comparison>>
  split_where(const std::vector<Comparison>& where) {
    std::vector<JoinEdge> joins;
    std::vector<std::vector<Comparison>> table_filters(from_.size());
    std::vector<Comparison> residual;
    for (const auto& cmp : where) {
      if (cmp.rhs_is_attr && cmp.rhs_attr.table != cmp.lhs.table) {
        if (cmp.op == CompareOp::Eq) {
          if (cmp.lhs.kind != ColumnKind::Int64)
            throw TypeError("join keys must be int64 attributes");
          joins.push_back({cmp.lhs, cmp.rhs_attr, false});
        } else {
          residual.push_back(cmp);
        }
      } else {
        table_filters[static_cast<std::size_t>(cmp.lhs.table)].push_back(cmp);
      }
    }
    return {std::move(joins), std::move(table_filters), std::move(residual)};
  }

  PlanPtr make_scan(int table) const {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanNode::Kind::Scan;
    node->table = table;
    node->table_name = from_[static_cast<std::size_t>(table)]->name;
    return node;
  }

  static PlanPtr make_select(PlanPtr child, std::vector<Comparison> predicate) {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanNode::Kind::Select;
    node->left = std::move(child);
    node->predicate = std::move(predicate);
    return node;
  }

  // Left-deep in FROM-list order with builds on the left: the last FROM
  // table drives the probe pipeline, every earlier table becomes a hash
  // build (or the auxiliary side of a cross join when no key links it).
  PlanPtr build_join_tree(std::vector<JoinEdge>& joins,
                          std::vector<std::vector<Comparison>>& table_filters) {
    const int k = static_cast<int>(from_.size());
    std::vector<bool> in_plan(static_cast<std::size_t>(k), false);
    PlanPtr plan = make_scan(k - 1);
    if (!table_filters[static_cast<std::size_t>(k - 1)].empty())
      plan = make_select(plan, table_filters[static_cast<std::size_t>(k - 1)]);
    in_plan[static_cast<std::size_t>(k - 1)] = true;

    std::vector<Comparison> leftovers;
    for (int t = 0; t < k - 1; ++t) {
      PlanPtr build = make_scan(t);
      if (!table_filters[static_cast<std::size_t>(t)].empty())
        build = make_select(build, table_filters[static_cast<std::size_t>(t)]);

      JoinEdge* edge = nullptr;
      for (auto& e : joins) {
        if (e.used) continue;
        bool a_here = e.a.table == t, b_here = e.b.table == t;
        if ((a_here && in_plan[static_cast<std::size_t>(e.b.table)]) ||
            (b_here && in_plan[static_cast<std::size_t>(e.a.table)])) {
          edge = &e;
          break;
        }
      }
      auto node = std::make_shared<PlanNode>();
      if (edge) {
        edge->used = true;
        node->kind = PlanNode::Kind::Join;
        node->left_key = edge->a.table == t ? edge->a : edge->b;
        node->right_key = edge->a.table == t ? edge->b : edge->a;
      } else {
        node->kind = PlanNode::Kind::CrossJoin;
      }
      node->left = build;
      node->right = plan;
      plan = node;
      in_plan[static_cast<std::size_t>(t)] = true;
    }
    // unused join edges become post-join filters
    std::vector<Comparison> post;
    for (const auto& e : joins) {
      if (e.used) continue;
      Comparison cmp;
      cmp.op = CompareOp::Eq;
      cmp.lhs = e.a;
      cmp.rhs_is_attr = true;
      cmp.rhs_attr = e.b;
      post.push_back(cmp);
    }
    if (!post.empty()) plan = make_select(plan, post);
    return plan;
  }

  // Non-trivial select expressions and aggregate inputs become Map nodes.
  ExprPtr item_expr(const RawSelectItem& item) const {
    if (item.is_aggregate && item.agg_star) return nullptr;
    return resolve_expr(item.expr);
  }

  PlanPtr add_maps(PlanPtr plan) {
    for (std::size_t i = 0; i < q_.select.size(); ++i) {
      const auto& item = q_.select[i];
      // COUNT ignores its argument over non-nullable data
      if (item.is_aggregate && (item.agg_star || item.fn == AggFn::Count)) {
        resolved_.push_back({});
        continue;
      }
      ExprPtr e = item_expr(item);
      ResolvedItem r;
      r.expr = e;
      if (e->kind == Expr::Kind::Attr) {
        r.attr = e->attr;
        r.is_plain_attr = true;
      } else {
        auto node = std::make_shared<PlanNode>();
        node->kind = PlanNode::Kind::Map;
        node->left = plan;
        node->expr = e;
        node->derived_id = derived_count_;
        node->output_name = render(*e);
        plan = node;
        r.attr.table = kDerivedTable;
        r.attr.column = derived_count_;
        r.attr.kind = e->result_kind();
        r.attr.name = node->output_name;
        ++derived_count_;
      }
      resolved_.push_back(std::move(r));
    }
    return plan;
  }

  PlanPtr add_root(PlanPtr plan) {
    bool has_agg = !q_.group_by.empty();
    for (const auto& item : q_.select) has_agg = has_agg || item.is_aggregate;

    auto project = std::make_shared<PlanNode>();
    project->kind = PlanNode::Kind::Project;

    if (!has_agg) {
      for (std::size_t i = 0; i < q_.select.size(); ++i) {
        const auto& item = q_.select[i];
        project->attrs.push_back(resolved_[i].attr);
        project->names.push_back(!item.alias.empty() ? item.alias : resolved_[i].attr.name);
      }
      project->left = plan;
      return project;
    }

    auto agg = std::make_shared<PlanNode>();
    agg->kind = PlanNode::Kind::Aggregate;
    for (const auto& raw : q_.group_by) {
      AttrRef key = resolve_attr(raw);
      if (key.kind == ColumnKind::Float64)
        throw TypeError("float64 attributes cannot be GROUP BY keys");
      agg->group_keys.push_back(key);
    }

    for (std::size_t i = 0; i < q_.select.size(); ++i) {
      const auto& item = q_.select[i];
      if (item.is_aggregate) {
        AggItem a;
        a.fn = item.fn;
        std::string rendered;
        if (item.fn == AggFn::Count) {
          rendered = "count(*)";
        } else {
          a.has_input = true;
          a.input = resolved_[i].attr;
          rendered = std::string(to_string(item.fn)) + "(" + render(*resolved_[i].expr) + ")";
        }
        a.output_name = !item.alias.empty() ? item.alias : rendered;
        AttrRef out;
        out.table = kAggOutput;
        out.column = static_cast<int>(agg->aggregates.size());
        out.kind = agg_out_kind(item.fn, a);
        out.name = a.output_name;
        agg->aggregates.push_back(a);
        project->attrs.push_back(out);
        project->names.push_back(a.output_name);
      } else {
        const AttrRef& ref = resolved_[i].attr;
        bool is_key = std::any_of(agg->group_keys.begin(), agg->group_keys.end(),
                                  [&](const AttrRef& k) { return k == ref; });
        if (!is_key)
          throw TypeError("attribute '" + ref.name + "' must appear in GROUP BY");
        project->attrs.push_back(ref);
        project->names.push_back(!item.alias.empty() ? item.alias : ref.name);
      }
    }
    agg->left = plan;
    project->left = agg;
    return project;
  }

  static ColumnKind agg_out_kind(AggFn fn, const AggItem& item) {
    switch (fn) {
      case AggFn::Count: return ColumnKind::Int64;
      case AggFn::Avg: return ColumnKind::Float64;
      default: break;
    }
    if (!item.has_input) return ColumnKind::Int64;
    if (item.input.kind == ColumnKind::String)
      throw TypeError("aggregate input must be numeric");
    return item.input.kind;
  }

  struct ResolvedItem {
    ExprPtr expr;
    AttrRef attr;
    bool is_plain_attr = false;
  };

  const RawQuery& q_;
  const Catalog& catalog_;
  std::vector<const CatalogEntry*> from_;
  std::vector<ResolvedItem> resolved_;
  int derived_count_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

PlanPtr parse_query(const std::string& text, const Catalog& catalog) {
  Parser parser(text);
  RawQuery raw = parser.parse();
  for (auto& item : raw.select)
    if (item.is_aggregate && item.agg_star && item.fn != AggFn::Count)
      throw SyntaxError(0, std::string(to_string(item.fn)) + "(*) is invalid");
  PlanBuilder builder(raw, catalog);
  return builder.build();
}

ColumnKind Expr::result_kind() const {
  switch (kind) {
    case Kind::Attr: return attr.kind;
    case Kind::IntLit: return ColumnKind::Int64;
    case Kind::FloatLit: return ColumnKind::Float64;
    case Kind::Binary:
      return (lhs->result_kind() == ColumnKind::Float64 ||
              rhs->result_kind() == ColumnKind::Float64)
                 ? ColumnKind::Float64
                 : ColumnKind::Int64;
  }
  return ColumnKind::Int64;
}

Catalog make_catalog(const std::vector<TablePtr>& tables) {
  Catalog c;
  for (const auto& t : tables) c.push_back({t->name(), t->schema()});
  return c;
}

const char* to_string(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return "sum";
    case AggFn::Count: return "count";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    case AggFn::Avg: return "avg";
  }
  return "?";
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Attr: return a->attr == b->attr;
    case Expr::Kind::IntLit: return a->ival == b->ival;
    case Expr::Kind::FloatLit: return a->fval == b->fval;
    case Expr::Kind::Binary:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const PlanPtr& a, const PlanPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->table != b->table || a->table_name != b->table_name) return false;
  if (a->predicate != b->predicate) return false;
  if (!(a->left_key == b->left_key) || !(a->right_key == b->right_key)) return false;
  if (a->derived_id != b->derived_id || a->output_name != b->output_name) return false;
  if (!equal(a->expr, b->expr)) return false;
  if (a->group_keys != b->group_keys || a->aggregates != b->aggregates) return false;
  if (a->attrs != b->attrs || a->names != b->names) return false;
  return equal(a->left, b->left) && equal(a->right, b->right);
}

}  // namespace hawk::sql

#include "patcheck/abstraction.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace patcheck {

VarId NameSupply::fresh() {
  if (next_ >= limit_) throw std::length_error("name supply exhausted");
  return next_++;
}

CorePattern CorePattern::var(VarId id) {
  CorePattern p;
  p.kind = Kind::Var;
  p.id = id;
  return p;
}

CorePattern CorePattern::constructor(const ConstructorSig* k, std::vector<CorePattern> args, VarId origin) {
  CorePattern p;
  p.kind = Kind::Con;
  p.con = k;
  p.args = std::move(args);
  p.id = origin;
  return p;
}

CorePattern CorePattern::guard(CorePattern inner, ExprPtr e) {
  CorePattern p;
  p.kind = Kind::Guard;
  p.args.push_back(std::move(inner));
  p.expr = std::move(e);
  return p;
}

bool operator==(const CorePattern& a, const CorePattern& b) {
  if (a.kind != b.kind || a.id != b.id || a.con != b.con || a.args != b.args) return false;
  if (a.kind == CorePattern::Kind::Guard) return *a.expr == *b.expr;
  return true;
}

Constraint Constraint::term_eq(VarId v, ExprPtr e) {
  Constraint c;
  c.kind = Kind::TermEq;
  c.var = v;
  c.expr = std::move(e);
  return c;
}

Constraint Constraint::var_eq(VarId a, VarId b) {
  Constraint c;
  c.kind = Kind::VarEq;
  c.var = a;
  c.other = b;
  return c;
}

Constraint Constraint::bottom(VarId v) {
  Constraint c;
  c.kind = Kind::Bottom;
  c.var = v;
  return c;
}

Constraint Constraint::type_eq(TypeExpr a, TypeExpr b) {
  Constraint c;
  c.kind = Kind::TypeEq;
  c.lhs_type = std::move(a);
  c.rhs_type = std::move(b);
  return c;
}

Constraint Constraint::con_eq(VarId v, const ConstructorSig* k, std::vector<VarId> args) {
  Constraint c;
  c.kind = Kind::ConEq;
  c.var = v;
  c.con = k;
  c.args = std::move(args);
  return c;
}

Constraint Constraint::holds(ExprPtr e) {
  Constraint c;
  c.kind = Kind::Holds;
  c.expr = std::move(e);
  return c;
}

bool operator==(const Constraint& a, const Constraint& b) {
  if (a.kind != b.kind || a.var != b.var || a.other != b.other || a.con != b.con || a.args != b.args ||
      a.lhs_type != b.lhs_type || a.rhs_type != b.rhs_type) {
    return false;
  }
  if (static_cast<bool>(a.expr) != static_cast<bool>(b.expr)) return false;
  return !a.expr || *a.expr == *b.expr;
}

bool TypingEnv::bind(VarId v, TypeExpr t) { return vars.emplace(v, std::move(t)).second; }

const TypeExpr* TypingEnv::lookup(VarId v) const {
  auto it = vars.find(v);
  return it == vars.end() ? nullptr : &it->second;
}

void strict_variables(const Expr& e, std::set<VarId>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      if (e.var) out.insert(e.var);
      return;
    case Expr::Kind::Unary:
      strict_variables(e.args[0], out);
      return;
    case Expr::Kind::Binary:
      strict_variables(e.args[0], out);
      if (e.binary_op != BinaryOp::And && e.binary_op != BinaryOp::Or) strict_variables(e.args[1], out);
      return;
    default:
      return;
  }
}

std::optional<bool> known_value(const Expr& e, const KnownBool& known) {
  switch (e.kind) {
    case Expr::Kind::Bool:
      return e.bool_value;
    case Expr::Kind::Var:
      return e.var ? known(e.var) : std::nullopt;
    case Expr::Kind::Unary:
      if (e.unary_op == UnaryOp::Not) {
        if (auto v = known_value(e.args[0], known)) return !*v;
      }
      return std::nullopt;
    case Expr::Kind::Binary:
      if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
        bool is_and = e.binary_op == BinaryOp::And;
        auto l = known_value(e.args[0], known);
        if (!l) return std::nullopt;
        if (*l != is_and) return *l;
        return known_value(e.args[1], known);
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

void strict_variables(const Expr& e, const KnownBool& known, std::set<VarId>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      if (e.var) out.insert(e.var);
      return;
    case Expr::Kind::Unary:
      strict_variables(e.args[0], known, out);
      return;
    case Expr::Kind::Binary:
      strict_variables(e.args[0], known, out);
      if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
        auto l = known_value(e.args[0], known);
        if (!l || *l != (e.binary_op == BinaryOp::And)) return;
      }
      strict_variables(e.args[1], known, out);
      return;
    default:
      return;
  }
}

namespace {

// Pushes a known result down into the operands; returns whether anything new
// was learned.
bool assume(const Expr& e, bool value, std::map<VarId, bool>& known, const std::function<VarId(VarId)>& rep) {
  switch (e.kind) {
    case Expr::Kind::Var:
      if (!e.var) return false;
      return known.emplace(rep(e.var), value).second;
    case Expr::Kind::Unary:
      return e.unary_op == UnaryOp::Not && assume(e.args[0], !value, known, rep);
    case Expr::Kind::Binary:
      if ((e.binary_op == BinaryOp::And && value) || (e.binary_op == BinaryOp::Or && !value)) {
        bool a = assume(e.args[0], value, known, rep);
        bool b = assume(e.args[1], value, known, rep);
        return a || b;
      }
      return false;
    default:
      return false;
  }
}

}  // namespace

std::map<VarId, bool> known_booleans(const std::vector<Constraint>& delta, const std::function<VarId(VarId)>& rep) {
  std::map<VarId, bool> known;
  for (const auto& c : delta) {
    if (c.kind == Constraint::Kind::ConEq && c.con->type_name == "Bool" && c.args.empty())
      known.emplace(rep(c.var), c.con->name == "True");
  }
  KnownBool lookup = [&](VarId v) -> std::optional<bool> {
    auto it = known.find(rep(v));
    if (it == known.end()) return std::nullopt;
    return it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : delta) {
      if (c.kind != Constraint::Kind::TermEq) continue;
      auto y = lookup(c.var);
      if (y) {
        changed |= assume(*c.expr, *y, known, rep);
      } else if (auto v = known_value(*c.expr, lookup)) {
        changed |= known.emplace(rep(c.var), *v).second;
      }
    }
  }
  return known;
}

void collect_vars(const Expr& e, std::vector<VarId>& out) {
  if (e.kind == Expr::Kind::Var && e.var != 0) {
    if (std::find(out.begin(), out.end(), e.var) == out.end()) out.push_back(e.var);
  }
  for (const auto& a : e.args) collect_vars(a, out);
}

namespace {

void push_unique(std::vector<VarId>& out, VarId v) {
  if (v != 0 && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

}  // namespace

void collect_vars(const CorePattern& p, std::vector<VarId>& out) {
  if (p.kind == CorePattern::Kind::Var) push_unique(out, p.id);
  for (const auto& a : p.args) collect_vars(a, out);
  if (p.expr) collect_vars(*p.expr, out);
}

void collect_vars(const Constraint& c, std::vector<VarId>& out) {
  push_unique(out, c.var);
  push_unique(out, c.other);
  for (VarId a : c.args) push_unique(out, a);
  if (c.expr) collect_vars(*c.expr, out);
}

namespace {

Expr rename_expr(const Expr& e, const std::map<VarId, VarId>& rename) {
  Expr out = e;
  if (out.kind == Expr::Kind::Var && out.var != 0) {
    auto it = rename.find(out.var);
    if (it != rename.end()) out.var = it->second;
  }
  for (auto& a : out.args) a = rename_expr(a, rename);
  return out;
}

bool mentions_any(const Expr& e, const std::map<VarId, VarId>& rename) {
  if (e.kind == Expr::Kind::Var && rename.count(e.var)) return true;
  return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return mentions_any(a, rename); });
}

using Namer = std::function<std::string(VarId)>;

std::string expr_text(const Expr& e, const Namer& name) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.var ? name(e.var) : e.name;
    case Expr::Kind::Int:
      return e.int_value.str();
    case Expr::Kind::Bool:
      return e.bool_value ? "True" : "False";
    case Expr::Kind::Unary:
      return std::string(e.unary_op == UnaryOp::Not ? "(not " : "(neg ") + expr_text(e.args[0], name) + ")";
    case Expr::Kind::Binary:
      return "(" + expr_text(e.args[0], name) + " " + std::string(to_string(e.binary_op)) + " " +
             expr_text(e.args[1], name) + ")";
    case Expr::Kind::App: {
      std::string s = "(" + e.name;
      for (const auto& a : e.args) s += " " + expr_text(a, name);
      return s + ")";
    }
  }
  return "?";
}

std::string pattern_text(const CorePattern& p, const Namer& name) {
  switch (p.kind) {
    case CorePattern::Kind::Var:
      return name(p.id);
    case CorePattern::Kind::Con: {
      std::string s = "(" + p.con->name;
      if (p.id != 0) s += "@" + name(p.id);
      for (const auto& a : p.args) s += " " + pattern_text(a, name);
      return s + ")";
    }
    case CorePattern::Kind::Guard:
      return "<" + pattern_text(p.args[0], name) + " <- " + expr_text(*p.expr, name) + ">";
  }
  return "?";
}

std::string constraint_text(const Constraint& c, const Namer& name) {
  switch (c.kind) {
    case Constraint::Kind::TermEq:
      return name(c.var) + " = " + expr_text(*c.expr, name);
    case Constraint::Kind::VarEq:
      return name(c.var) + " = " + name(c.other);
    case Constraint::Kind::Bottom:
      return name(c.var) + " = _|_";
    case Constraint::Kind::TypeEq:
      return c.lhs_type.to_string() + " ~ " + c.rhs_type.to_string();
    case Constraint::Kind::ConEq: {
      std::string s = name(c.var) + " = " + c.con->name;
      for (VarId a : c.args) s += " " + name(a);
      return s;
    }
    case Constraint::Kind::Holds:
      return "holds " + expr_text(*c.expr, name);
  }
  return "?";
}

}  // namespace

ExprPtr rename_vars(const ExprPtr& e, const std::map<VarId, VarId>& rename) {
  if (!e || !mentions_any(*e, rename)) return e;
  return std::make_shared<const Expr>(rename_expr(*e, rename));
}

std::string canonical_key(const ValueAbstraction& a) {
  std::map<VarId, std::size_t> index;
  auto name = [&](VarId v) -> std::string {
    auto [it, inserted] = index.emplace(v, index.size());
    std::string s = "%" + std::to_string(it->second);
    if (const TypeExpr* t = a.env.lookup(v)) s += ":" + t->to_string();
    return s;
  };
  std::string key;
  for (const auto& p : a.patterns) key += pattern_text(p, name) + " ";
  key += "|";
  std::vector<std::string> parts;
  parts.reserve(a.constraints.size());
  for (const auto& c : a.constraints) parts.push_back(constraint_text(c, name));
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  for (const auto& p : parts) key += p + ";";
  return key;
}

namespace {

std::string raw_name(VarId v) { return "v" + std::to_string(v); }

}  // namespace

std::string debug_string(const Expr& e) { return expr_text(e, raw_name); }
std::string debug_string(const CorePattern& p) { return pattern_text(p, raw_name); }
std::string debug_string(const Constraint& c) { return constraint_text(c, raw_name); }

std::string debug_string(const ValueAbstraction& a) {
  std::string s = "<";
  for (std::size_t i = 0; i < a.patterns.size(); ++i) {
    if (i) s += " ";
    s += debug_string(a.patterns[i]);
  }
  s += " | ";
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    if (i) s += ", ";
    s += debug_string(a.constraints[i]);
  }
  return s + ">";
}

}  // namespace patcheck

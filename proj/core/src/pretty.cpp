#include "patcheck/syntax.hpp"

namespace patcheck {

namespace {

constexpr int kAppPrec = 10;
constexpr int kAtomPrec = 11;

std::string integer_text(const Integer& v, bool atomic) {
  std::string s = v.str();
  if (v < 0 && atomic) return "(" + s + ")";
  return s;
}

std::string print_expr(const Expr& e, int ctx) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Int:
      return integer_text(e.int_value, ctx > 0);
    case Expr::Kind::Bool:
      return e.bool_value ? "True" : "False";
    case Expr::Kind::Unary: {
      std::string s = e.unary_op == UnaryOp::Not ? "not " + print_expr(e.args[0], kAtomPrec)
                                                 : "-" + print_expr(e.args[0], kAtomPrec);
      return ctx > kAppPrec ? "(" + s + ")" : s;
    }
    case Expr::Kind::App: {
      if (e.args.empty()) return e.name;
      std::string s = e.name;
      for (const auto& a : e.args) s += " " + print_expr(a, kAtomPrec);
      return ctx > kAppPrec ? "(" + s + ")" : s;
    }
    case Expr::Kind::Binary: {
      int p = precedence(e.binary_op);
      bool right_assoc = e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or;
      bool non_assoc = is_comparison(e.binary_op);
      int lctx = right_assoc || non_assoc ? p + 1 : p;
      int rctx = right_assoc ? p : p + 1;
      std::string s = print_expr(e.args[0], lctx) + " " + std::string(to_string(e.binary_op)) + " " +
                      print_expr(e.args[1], rctx);
      return p < ctx ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string print_atype(const TypeExpr& t) {
  std::string s = pretty_print(t);
  bool needs = t.kind == TypeExpr::Kind::Con && (t.name == "->" || (!t.args.empty() && t.name != "[]" &&
                                                                     !is_tuple_name(t.name)));
  return needs ? "(" + s + ")" : s;
}

}  // namespace

std::string pretty_print(const Expr& expr) { return print_expr(expr, 0); }

std::string pretty_print(const TypeExpr& t) {
  if (t.is_con("->")) {
    const TypeExpr& a = t.args[0];
    std::string lhs = pretty_print(a);
    if (a.is_con("->")) lhs = "(" + lhs + ")";
    return lhs + " -> " + pretty_print(t.args[1]);
  }
  if (t.kind == TypeExpr::Kind::Var) return t.name;
  if (t.name == "[]" && t.args.size() == 1) return "[" + pretty_print(t.args[0]) + "]";
  if (is_tuple_name(t.name)) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += pretty_print(t.args[i]);
    }
    return out + ")";
  }
  std::string out = t.name;
  for (const auto& a : t.args) out += " " + print_atype(a);
  return out;
}

std::string pretty_print(const SurfacePattern& p, bool atomic) {
  using K = SurfacePattern::Kind;
  switch (p.kind) {
    case K::Variable:
      return p.name;
    case K::Wildcard:
      return "_";
    case K::IntLiteral:
      return integer_text(p.int_value, atomic);
    case K::BoolLiteral:
      return p.bool_value ? "True" : "False";
    case K::ConApp: {
      std::string s = p.name;
      for (const auto& a : p.args) s += " " + pretty_print(a, true);
      return atomic && !p.args.empty() ? "(" + s + ")" : s;
    }
    case K::Tuple:
    case K::List: {
      std::string s = p.kind == K::Tuple ? "(" : "[";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) s += ", ";
        s += pretty_print(p.args[i], false);
      }
      return s + (p.kind == K::Tuple ? ")" : "]");
    }
    case K::Cons: {
      const auto& head = p.args[0];
      bool wrap_head = head.kind == K::Cons || (head.kind == K::IntLiteral && head.int_value < 0);
      std::string s = (wrap_head ? "(" + pretty_print(head, false) + ")" : pretty_print(head, false)) + ":" +
                      pretty_print(p.args[1], false);
      return atomic ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string render_clause_head(const FunctionDef& fn, const Clause& clause) {
  std::string s = fn.name;
  for (const auto& p : clause.patterns) s += " " + pretty_print(p, true);
  if (clause.guard) s += " | " + pretty_print(*clause.guard);
  return s;
}

std::string pretty_print(const Program& program) {
  std::string out;
  for (const auto* d : program.user_data()) {
    out += "data " + d->type_name;
    for (const auto& p : d->type_params) out += " " + p;
    for (std::size_t i = 0; i < d->constructors.size(); ++i) {
      out += i == 0 ? " = " : " | ";
      out += d->constructors[i].name;
      for (const auto& t : d->constructors[i].arg_types) out += " " + print_atype(t);
    }
    out += "\n";
  }
  if (!out.empty()) out += "\n";
  for (const auto& s : program.signatures) {
    out += s.name + " ::";
    for (const auto& t : s.arg_types) {
      out += " " + (t.is_con("->") ? "(" + pretty_print(t) + ")" : pretty_print(t)) + " ->";
    }
    out += " " + pretty_print(s.result_type) + "\n";
  }
  for (const auto& fn : program.functions) {
    out += "\n";
    for (const auto& c : fn.clauses) out += render_clause_head(fn, c) + " = " + c.rhs_text + "\n";
  }
  return out;
}

}  // namespace patcheck

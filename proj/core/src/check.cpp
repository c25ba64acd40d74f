#include <set>

#include "patcheck/syntax.hpp"

namespace patcheck {

namespace {

bool is_numeric(const Program& p, const TypeExpr& t) {
  if (t.kind != TypeExpr::Kind::Con) return false;
  const DataDecl* d = p.find_data(t.name);
  return d && d->kind == DataDecl::Kind::Numeric;
}

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  std::vector<SourceError> run() {
    for (const auto* d : p_.user_data()) check_data(*d);
    for (const auto& s : p_.signatures) {
      for (const auto& t : s.arg_types) check_type(t, s.span, nullptr);
      check_type(s.result_type, s.span, nullptr);
    }
    for (auto& fn : p_.functions) check_function(fn);
    return std::move(errors_);
  }

 private:
  void error(const SourceSpan& span, std::string msg) {
    errors_.push_back({SourceError::Kind::Semantic, span, std::move(msg)});
  }

  void check_data(const DataDecl& d) {
    std::set<std::string> params(d.type_params.begin(), d.type_params.end());
    for (const auto& k : d.constructors) {
      for (const auto& t : k.arg_types) check_type(t, d.span, &params);
    }
  }

  /// Type constructors must exist and be saturated; in data declarations all
  /// type variables must be parameters.
  void check_type(const TypeExpr& t, const SourceSpan& span, const std::set<std::string>* params) {
    if (t.is_var()) {
      if (params && !params->count(t.name)) error(span, "type variable '" + t.name + "' is not in scope");
      return;
    }
    if (t.name == "->") {
      for (const auto& a : t.args) check_type(a, span, params);
      return;
    }
    const DataDecl* d = p_.find_data(t.name);
    if (!d) {
      error(span, "unknown type '" + t.name + "'");
      return;
    }
    if (d->type_params.size() != t.args.size()) {
      error(span, "type '" + d->type_name + "' expects " + std::to_string(d->type_params.size()) +
                      " argument(s) but was given " + std::to_string(t.args.size()));
    }
    for (const auto& a : t.args) check_type(a, span, params);
  }

  void check_function(FunctionDef& fn) {
    const Signature* sig = p_.find_signature(fn.name);
    if (!sig) {
      error(fn.span, "function '" + fn.name + "' has no type signature");
      return;
    }
    if (sig->arg_types.size() != fn.arity()) {
      error(fn.span, "function '" + fn.name + "' has " + std::to_string(fn.arity()) +
                         " argument(s) but its type signature has " + std::to_string(sig->arg_types.size()));
      return;
    }
    for (auto& clause : fn.clauses) {
      std::map<std::string, TypeExpr> vars;
      for (std::size_t i = 0; i < clause.patterns.size(); ++i) {
        check_pattern(clause.patterns[i], sig->arg_types[i], vars);
      }
      if (clause.guard) {
        resolve(*clause.guard, vars);
        auto t = infer(*clause.guard, vars);
        if (t && !t->is_con("Bool")) {
          error(clause.guard->span, "guard has type " + t->to_string() + ", expected Bool");
        }
      }
    }
  }

  void mismatch(const SurfacePattern& p, const TypeExpr& expected, std::string_view what) {
    error(p.span, std::string(what) + " pattern '" + pretty_print(p) + "' cannot match a value of type " +
                      expected.to_string());
  }

  void check_pattern(const SurfacePattern& p, const TypeExpr& type, std::map<std::string, TypeExpr>& vars) {
    using K = SurfacePattern::Kind;
    switch (p.kind) {
      case K::Wildcard:
        return;
      case K::Variable:
        if (!vars.emplace(p.name, type).second) {
          error(p.span, "duplicate pattern variable '" + p.name + "' (non-linear patterns are not allowed)");
        }
        return;
      case K::IntLiteral:
        if (!is_numeric(p_, type)) mismatch(p, type, "integer literal");
        return;
      case K::BoolLiteral:
        if (!type.is_con("Bool")) mismatch(p, type, "Boolean");
        return;
      case K::ConApp: {
        const ConstructorSig* k = p_.find_constructor(p.name);
        if (!k) {
          error(p.span, "unknown constructor '" + p.name + "'");
          return;
        }
        if (k->arity() != p.args.size()) {
          error(p.span, "constructor '" + p.name + "' expects " + std::to_string(k->arity()) +
                            " argument(s) but the pattern has " + std::to_string(p.args.size()) +
                            (p.args.size() < k->arity() ? " (unsaturated constructor)" : ""));
          return;
        }
        check_constructor(p, *k, p.args, type, vars);
        return;
      }
      case K::Tuple: {
        const ConstructorSig* k = p_.find_constructor(tuple_type_name(p.args.size()));
        check_constructor(p, *k, p.args, type, vars);
        return;
      }
      case K::List: {
        if (!type.is_con("[]")) {
          mismatch(p, type, "list");
          return;
        }
        for (const auto& e : p.args) check_pattern(e, type.args[0], vars);
        return;
      }
      case K::Cons: {
        if (!type.is_con("[]")) {
          mismatch(p, type, "list");
          return;
        }
        check_pattern(p.args[0], type.args[0], vars);
        check_pattern(p.args[1], type, vars);
        return;
      }
    }
  }

  void check_constructor(const SurfacePattern& p, const ConstructorSig& k, const std::vector<SurfacePattern>& args,
                         const TypeExpr& type, std::map<std::string, TypeExpr>& vars) {
    if (!type.is_con(k.type_name)) {
      mismatch(p, type, "constructor");
      return;
    }
    const DataDecl* d = p_.find_data(k.type_name);
    for (std::size_t i = 0; i < args.size(); ++i) {
      check_pattern(args[i], substitute(k.arg_types[i], d->type_params, type.args), vars);
    }
  }

  bool is_top_level(const std::string& name) const {
    return p_.find_signature(name) || p_.find_function(name);
  }

  void resolve(Expr& e, const std::map<std::string, TypeExpr>& vars) {
    switch (e.kind) {
      case Expr::Kind::Var:
        if (vars.count(e.name)) return;
        if (e.name == "otherwise") return;
        if (is_top_level(e.name)) {
          std::string name = e.name;
          SourceSpan span = e.span;
          e = Expr::apply(std::move(name), {});
          e.span = span;
          return;
        }
        error(e.span, "variable '" + e.name + "' is not in scope");
        return;
      case Expr::Kind::App:
        if (vars.count(e.name)) {
          error(e.span, "applying the pattern variable '" + e.name + "' is not supported in guards");
        }
        for (auto& a : e.args) resolve(a, vars);
        return;
      default:
        for (auto& a : e.args) resolve(a, vars);
        return;
    }
  }

  /// Light type inference over the fixed operator set; nullopt means unknown
  /// (opaque applications of undeclared functions).
  std::optional<TypeExpr> infer(const Expr& e, const std::map<std::string, TypeExpr>& vars) {
    const TypeExpr boolean = TypeExpr::con("Bool");
    const TypeExpr integer = TypeExpr::con("Int");
    switch (e.kind) {
      case Expr::Kind::Var: {
        if (e.name == "otherwise") return boolean;
        auto it = vars.find(e.name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
      }
      case Expr::Kind::Int:
        return std::nullopt;  // literals adapt to Int or Word8
      case Expr::Kind::Bool:
        return boolean;
      case Expr::Kind::App: {
        for (const auto& a : e.args) infer(a, vars);
        const Signature* s = p_.find_signature(e.name);
        if (s && s->arg_types.size() == e.args.size()) return s->result_type;
        return std::nullopt;
      }
      case Expr::Kind::Unary: {
        auto t = infer(e.args[0], vars);
        if (e.unary_op == UnaryOp::Not) {
          expect(e.args[0], t, boolean);
          return boolean;
        }
        if (t && !is_numeric(p_, *t)) error(e.span, "negate expects a numeric argument");
        return t;
      }
      case Expr::Kind::Binary: {
        auto l = infer(e.args[0], vars);
        auto r = infer(e.args[1], vars);
        switch (e.binary_op) {
          case BinaryOp::And:
          case BinaryOp::Or:
            expect(e.args[0], l, boolean);
            expect(e.args[1], r, boolean);
            return boolean;
          case BinaryOp::Eq:
          case BinaryOp::Ne:
            if (l && r && *l != *r) error(e.span, "cannot compare " + l->to_string() + " with " + r->to_string());
            return boolean;
          case BinaryOp::Lt:
          case BinaryOp::Le:
          case BinaryOp::Gt:
          case BinaryOp::Ge:
            numeric_operands(e, l, r);
            return boolean;
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul: {
            numeric_operands(e, l, r);
            if (l) return l;
            if (r) return r;
            return integer;
          }
        }
      }
    }
    return std::nullopt;
  }

  void expect(const Expr& e, const std::optional<TypeExpr>& t, const TypeExpr& want) {
    if (t && *t != want) error(e.span, "expected " + want.to_string() + " but expression has type " + t->to_string());
  }

  void numeric_operands(const Expr& e, const std::optional<TypeExpr>& l, const std::optional<TypeExpr>& r) {
    if (l && !is_numeric(p_, *l)) error(e.span, "operator " + std::string(to_string(e.binary_op)) + " expects numbers");
    else if (r && !is_numeric(p_, *r)) error(e.span, "operator " + std::string(to_string(e.binary_op)) + " expects numbers");
    else if (l && r && *l != *r) error(e.span, "cannot combine " + l->to_string() + " with " + r->to_string());
  }

  Program& p_;
  std::vector<SourceError> errors_;
};

}  // namespace

Outcome<Program> check_arity_and_scope(Program program) {
  Outcome<Program> out;
  out.errors = Checker(program).run();
  if (out.errors.empty()) out.value = std::move(program);
  return out;
}

void collect_pattern_types(const Program& program, const SurfacePattern& p, const TypeExpr& type,
                           std::map<std::string, TypeExpr>& out) {
  using K = SurfacePattern::Kind;
  switch (p.kind) {
    case K::Variable:
      out.emplace(p.name, type);
      return;
    case K::ConApp:
    case K::Tuple: {
      const ConstructorSig* k =
          program.find_constructor(p.kind == K::Tuple ? tuple_type_name(p.args.size()) : p.name);
      const DataDecl* d = k ? program.find_data(k->type_name) : nullptr;
      if (!d) return;
      for (std::size_t i = 0; i < p.args.size() && i < k->arity(); ++i) {
        collect_pattern_types(program, p.args[i], substitute(k->arg_types[i], d->type_params, type.args), out);
      }
      return;
    }
    case K::List:
      for (const auto& e : p.args) collect_pattern_types(program, e, type.args.at(0), out);
      return;
    case K::Cons:
      collect_pattern_types(program, p.args[0], type.args.at(0), out);
      collect_pattern_types(program, p.args[1], type, out);
      return;
    default:
      return;
  }
}

}  // namespace patcheck

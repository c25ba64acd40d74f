#include <algorithm>

#include "patcheck/syntax.hpp"

namespace patcheck {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "||";
    case BinaryOp::And: return "&&";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "/=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
  }
  return "?";
}

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 2;
    case BinaryOp::And: return 3;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
    case BinaryOp::Mul: return 7;
  }
  return 0;
}

bool is_comparison(BinaryOp op) { return precedence(op) == 4; }

Expr Expr::variable(std::string name, VarId id) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.var = id;
  return e;
}

Expr Expr::integer(Integer v) {
  Expr e;
  e.kind = Kind::Int;
  e.int_value = std::move(v);
  return e;
}

Expr Expr::boolean(bool v) {
  Expr e;
  e.kind = Kind::Bool;
  e.bool_value = v;
  return e;
}

Expr Expr::unary(UnaryOp op, Expr x) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary_op = op;
  e.args.push_back(std::move(x));
  return e;
}

Expr Expr::binary(BinaryOp op, Expr l, Expr r) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary_op = op;
  e.args.push_back(std::move(l));
  e.args.push_back(std::move(r));
  return e;
}

Expr Expr::apply(std::string fn, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::App;
  e.name = std::move(fn);
  e.args = std::move(args);
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Var:
      return a.name == b.name && a.var == b.var;
    case Expr::Kind::Int:
      return a.int_value == b.int_value;
    case Expr::Kind::Bool:
      return a.bool_value == b.bool_value;
    case Expr::Kind::Unary:
      return a.unary_op == b.unary_op && a.args == b.args;
    case Expr::Kind::Binary:
      return a.binary_op == b.binary_op && a.args == b.args;
    case Expr::Kind::App:
      return a.name == b.name && a.args == b.args;
  }
  return false;
}

bool operator==(const SurfacePattern& a, const SurfacePattern& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SurfacePattern::Kind::Variable:
      return a.name == b.name;
    case SurfacePattern::Kind::Wildcard:
      return true;
    case SurfacePattern::Kind::ConApp:
      return a.name == b.name && a.args == b.args;
    case SurfacePattern::Kind::IntLiteral:
      return a.int_value == b.int_value;
    case SurfacePattern::Kind::BoolLiteral:
      return a.bool_value == b.bool_value;
    case SurfacePattern::Kind::Tuple:
    case SurfacePattern::Kind::List:
    case SurfacePattern::Kind::Cons:
      return a.args == b.args;
  }
  return false;
}

bool operator==(const Clause& a, const Clause& b) {
  return a.patterns == b.patterns && a.guard == b.guard && a.rhs_text == b.rhs_text;
}

bool operator==(const FunctionDef& a, const FunctionDef& b) {
  return a.name == b.name && a.clauses == b.clauses;
}

namespace {

std::shared_ptr<DataDecl> make_builtin(std::string name, std::vector<std::string> params) {
  auto d = std::make_shared<DataDecl>();
  d->type_name = std::move(name);
  d->type_params = std::move(params);
  d->builtin = true;
  return d;
}

void add_constructor(DataDecl& d, std::string name, std::vector<TypeExpr> args, TypeExpr result,
                     ConstructorSig::Sugar sugar = ConstructorSig::Sugar::None) {
  ConstructorSig k;
  k.name = std::move(name);
  k.arg_types = std::move(args);
  k.result_type = std::move(result);
  k.type_name = d.type_name;
  k.index = d.constructors.size();
  k.sugar = sugar;
  d.constructors.push_back(std::move(k));
}

}  // namespace

Program::Program() {
  {
    auto d = make_builtin("Bool", {});
    add_constructor(*d, "False", {}, TypeExpr::con("Bool"));
    add_constructor(*d, "True", {}, TypeExpr::con("Bool"));
    add_data(d);
  }
  {
    auto d = make_builtin("[]", {"a"});
    auto list_a = TypeExpr::list(TypeExpr::var("a"));
    add_constructor(*d, "[]", {}, list_a, ConstructorSig::Sugar::Nil);
    add_constructor(*d, ":", {TypeExpr::var("a"), list_a}, list_a, ConstructorSig::Sugar::Cons);
    add_data(d);
  }
  for (std::size_t n = 0; n <= kMaxTupleArity; ++n) {
    if (n == 1) continue;
    std::vector<std::string> params;
    std::vector<TypeExpr> args;
    for (std::size_t i = 0; i < n; ++i) {
      params.push_back("t" + std::to_string(i + 1));
      args.push_back(TypeExpr::var(params.back()));
    }
    auto d = make_builtin(tuple_type_name(n), params);
    add_constructor(*d, tuple_type_name(n), args, TypeExpr::tuple(args), ConstructorSig::Sugar::Tuple);
    add_data(d);
  }
  {
    auto d = make_builtin("Int", {});
    d->kind = DataDecl::Kind::Numeric;
    add_data(d);
  }
  {
    auto d = make_builtin("Word8", {});
    d->kind = DataDecl::Kind::Numeric;
    d->range = std::make_pair(Integer(0), Integer(255));
    add_data(d);
  }
}

void Program::add_data(std::shared_ptr<const DataDecl> decl) {
  types_.emplace(decl->type_name, decl.get());
  for (const auto& k : decl->constructors) constructors_.emplace(k.name, &k);
  data_decls.push_back(std::move(decl));
}

const DataDecl* Program::find_data(std::string_view type_name) const {
  auto it = types_.find(type_name);
  return it == types_.end() ? nullptr : it->second;
}

const ConstructorSig* Program::find_constructor(std::string_view name) const {
  auto it = constructors_.find(name);
  return it == constructors_.end() ? nullptr : it->second;
}

const Signature* Program::find_signature(std::string_view name) const {
  for (const auto& s : signatures) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const FunctionDef* Program::find_function(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<const DataDecl*> Program::user_data() const {
  std::vector<const DataDecl*> out;
  for (const auto& d : data_decls) {
    if (!d->builtin) out.push_back(d.get());
  }
  return out;
}

bool Program::structurally_equal(const Program& other) const {
  auto a = user_data();
  auto b = other.user_data();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->type_name != b[i]->type_name || a[i]->type_params != b[i]->type_params) return false;
    if (a[i]->constructors.size() != b[i]->constructors.size()) return false;
    for (std::size_t k = 0; k < a[i]->constructors.size(); ++k) {
      const auto& x = a[i]->constructors[k];
      const auto& y = b[i]->constructors[k];
      if (x.name != y.name || x.arg_types != y.arg_types) return false;
    }
  }
  return signatures == other.signatures && functions == other.functions;
}

std::string SourceError::to_string(std::string_view file) const {
  std::string out(file);
  out += ':' + std::to_string(span.line) + ':' + std::to_string(span.col) + ": ";
  out += kind == Kind::Parse ? "parse error: " : "error: ";
  out += message;
  return out;
}

}  // namespace patcheck

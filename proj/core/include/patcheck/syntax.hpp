#pragma once

// MiniFun surface syntax: AST, parser entry points, semantic checks and the
// pretty-printer.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patcheck/types.hpp"

namespace patcheck {

/// Analysis-wide unique variable identifier. Zero means "not a local".
using VarId = std::uint32_t;

struct DataDecl;

struct ConstructorSig {
  enum class Sugar { None, Nil, Cons, Tuple };

  std::string name;
  std::vector<std::string> existential_vars;
  std::vector<std::pair<TypeExpr, TypeExpr>> context;
  std::vector<TypeExpr> arg_types;
  TypeExpr result_type;
  std::string type_name;
  std::size_t index = 0;  // position within the owning declaration
  Sugar sugar = Sugar::None;

  std::size_t arity() const { return arg_types.size(); }
};

struct DataDecl {
  /// Int-like types have no constructors; the analysis handles them through
  /// literal guards instead.
  enum class Kind { Algebraic, Numeric };

  std::string type_name;
  std::vector<std::string> type_params;
  std::vector<ConstructorSig> constructors;
  Kind kind = Kind::Algebraic;
  std::optional<std::pair<Integer, Integer>> range;  // bounded numerics only
  bool builtin = false;
  SourceSpan span;
};

enum class UnaryOp { Not, Negate };
enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul };

std::string_view to_string(BinaryOp op);
int precedence(BinaryOp op);
bool is_comparison(BinaryOp op);

struct Expr {
  enum class Kind { Var, Int, Bool, Unary, Binary, App };

  Kind kind = Kind::Var;
  std::string name;  // Var: identifier; App: function name
  VarId var = 0;     // Var: bound local after desugaring
  Integer int_value;
  bool bool_value = false;
  UnaryOp unary_op = UnaryOp::Not;
  BinaryOp binary_op = BinaryOp::And;
  std::vector<Expr> args;
  SourceSpan span;

  static Expr variable(std::string name, VarId id = 0);
  static Expr integer(Integer v);
  static Expr boolean(bool v);
  static Expr unary(UnaryOp op, Expr e);
  static Expr binary(BinaryOp op, Expr l, Expr r);
  static Expr apply(std::string fn, std::vector<Expr> args);

  /// Structural equality; ignores spans.
  friend bool operator==(const Expr& a, const Expr& b);
};

struct SurfacePattern {
  enum class Kind { Variable, Wildcard, ConApp, IntLiteral, BoolLiteral, Tuple, List, Cons };

  Kind kind = Kind::Wildcard;
  std::string name;  // Variable / ConApp
  Integer int_value;
  bool bool_value = false;
  std::vector<SurfacePattern> args;  // ConApp args, Tuple/List elems, Cons {head, tail}
  SourceSpan span;

  friend bool operator==(const SurfacePattern& a, const SurfacePattern& b);
};

struct Clause {
  std::vector<SurfacePattern> patterns;
  std::optional<Expr> guard;
  SourceSpan span;
  SourceSpan rhs_span;
  std::string rhs_text;

  friend bool operator==(const Clause& a, const Clause& b);
};

struct FunctionDef {
  std::string name;
  std::vector<Clause> clauses;
  SourceSpan span;

  std::size_t arity() const { return clauses.empty() ? 0 : clauses.front().patterns.size(); }
  friend bool operator==(const FunctionDef& a, const FunctionDef& b);
};

struct Signature {
  std::string name;
  std::vector<TypeExpr> arg_types;
  TypeExpr result_type;
  SourceSpan span;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.name == b.name && a.arg_types == b.arg_types && a.result_type == b.result_type;
  }
};

struct Program {
  std::string file_name;
  std::vector<std::shared_ptr<const DataDecl>> data_decls;  // built-ins first
  std::vector<Signature> signatures;
  std::vector<FunctionDef> functions;

  Program();

  void add_data(std::shared_ptr<const DataDecl> decl);
  const DataDecl* find_data(std::string_view type_name) const;
  const ConstructorSig* find_constructor(std::string_view name) const;
  const Signature* find_signature(std::string_view name) const;
  const FunctionDef* find_function(std::string_view name) const;

  /// User declarations only (skips the preloaded built-ins).
  std::vector<const DataDecl*> user_data() const;

  /// Equality of user-visible structure; spans and RHS positions ignored.
  bool structurally_equal(const Program& other) const;

 private:
  std::map<std::string, const DataDecl*, std::less<>> types_;
  std::map<std::string, const ConstructorSig*, std::less<>> constructors_;
};

struct SourceError {
  enum class Kind { Parse, Semantic };

  Kind kind = Kind::Parse;
  SourceSpan span;
  std::string message;

  std::string to_string(std::string_view file) const;
};

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::vector<SourceError> errors;

  bool ok() const { return value.has_value() && errors.empty(); }
};

/// Parse MiniFun source text. Built-in types are preloaded into the result.
Outcome<Program> parse_program(std::string_view source, std::string file_name);

/// Saturation, linearity, scoping, typing of patterns against signatures and
/// arity checks. Bare references to top-level functions inside guards are
/// rewritten into zero-argument applications.
Outcome<Program> check_arity_and_scope(Program program);

/// Convenience: parse then check.
Outcome<Program> load_program(std::string_view source, std::string file_name);

/// Types of the variables bound by `pattern` at type `type`. Requires a
/// checked program.
void collect_pattern_types(const Program& program, const SurfacePattern& pattern, const TypeExpr& type,
                           std::map<std::string, TypeExpr>& out);

std::string pretty_print(const Program& program);
std::string pretty_print(const SurfacePattern& pattern, bool atomic = false);
std::string pretty_print(const Expr& expr);
std::string pretty_print(const TypeExpr& type);

/// "name p1 p2 | guard", as a clause head appears in source.
std::string render_clause_head(const FunctionDef& fn, const Clause& clause);

}  // namespace patcheck

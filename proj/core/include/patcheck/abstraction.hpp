#pragma once

// Core patterns, constraints and value abstractions (Γ, v⃗, Δ).

#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "patcheck/syntax.hpp"

namespace patcheck {

using ExprPtr = std::shared_ptr<const Expr>;

/// Hands out analysis-wide unique variable ids. Each function gets its own
/// disjoint range so functions can be desugared and analyzed independently.
class NameSupply {
 public:
  static constexpr VarId kStride = VarId{1} << 20;

  explicit NameSupply(VarId first = 1) : next_(first), limit_(first + kStride) {}
  static NameSupply for_function(std::size_t index) {
    return NameSupply(static_cast<VarId>(index * kStride + 1));
  }

  VarId fresh();
  VarId peek() const { return next_; }

 private:
  VarId next_;
  VarId limit_;
};

/// Desugared pattern. Inside clause vectors a Guard element consumes no value;
/// value abstraction vectors contain only Var and Con nodes.
struct CorePattern {
  enum class Kind { Var, Con, Guard };

  Kind kind = Kind::Var;
  /// Var: the variable. Con in a value abstraction: the variable this
  /// constructor refined (0 when unknown).
  VarId id = 0;
  const ConstructorSig* con = nullptr;
  std::vector<CorePattern> args;  // Con: arguments; Guard: {inner}
  ExprPtr expr;                   // Guard only

  static CorePattern var(VarId id);
  static CorePattern constructor(const ConstructorSig* k, std::vector<CorePattern> args, VarId origin = 0);
  static CorePattern guard(CorePattern inner, ExprPtr e);

  bool is_var() const { return kind == Kind::Var; }
  bool is_con() const { return kind == Kind::Con; }
  bool is_guard() const { return kind == Kind::Guard; }

  friend bool operator==(const CorePattern& a, const CorePattern& b);
};

struct Constraint {
  enum class Kind {
    TermEq,  // var = expr
    VarEq,   // var = other
    Bottom,  // var = ⊥
    TypeEq,  // lhs_type ~ rhs_type
    ConEq,   // var = con args...
    Holds,   // expr is True (range postulates)
  };

  Kind kind = Kind::TermEq;
  VarId var = 0;
  VarId other = 0;
  ExprPtr expr;
  TypeExpr lhs_type;
  TypeExpr rhs_type;
  const ConstructorSig* con = nullptr;
  std::vector<VarId> args;

  static Constraint term_eq(VarId v, ExprPtr e);
  static Constraint var_eq(VarId a, VarId b);
  static Constraint bottom(VarId v);
  static Constraint type_eq(TypeExpr a, TypeExpr b);
  static Constraint con_eq(VarId v, const ConstructorSig* k, std::vector<VarId> args);
  static Constraint holds(ExprPtr e);

  friend bool operator==(const Constraint& a, const Constraint& b);
};

struct TypingEnv {
  std::map<VarId, TypeExpr> vars;
  std::set<std::string> type_vars;

  /// Adds a binding; returns false (and changes nothing) if `v` is bound.
  bool bind(VarId v, TypeExpr t);
  const TypeExpr* lookup(VarId v) const;
};

struct ValueAbstraction {
  TypingEnv env;
  std::vector<CorePattern> patterns;
  std::vector<Constraint> constraints;
};

// ---- utilities --------------------------------------------------------------

/// Variables mentioned by an expression, in first-occurrence order.
void collect_vars(const Expr& e, std::vector<VarId>& out);
void collect_vars(const CorePattern& p, std::vector<VarId>& out);
void collect_vars(const Constraint& c, std::vector<VarId>& out);

/// Variables whose evaluation is forced whenever `e` is evaluated: operands
/// of arithmetic, comparisons and `not`, and the left operand of `&&`/`||`.
/// Arguments of applications are unknown and excluded.
void strict_variables(const Expr& e, std::set<VarId>& out);

/// Boolean value of a variable when known, e.g. from `v = True`.
using KnownBool = std::function<std::optional<bool>(VarId)>;

/// strict_variables refined by known Booleans: the right operand of `&&`
/// (`||`) is strict as well once the left one is known True (False).
void strict_variables(const Expr& e, const KnownBool& known, std::set<VarId>& out);
std::optional<bool> known_value(const Expr& e, const KnownBool& known);

/// Boolean values implied by constructor equalities and guard equalities,
/// keyed by `rep` of each variable. Propagates both ways through `not`,
/// `&&` and `||` (y = a || b with y False gives a and b False).
std::map<VarId, bool> known_booleans(const std::vector<Constraint>& delta,
                                     const std::function<VarId(VarId)>& rep);

/// Replace variables in an expression; ids absent from `rename` are kept.
ExprPtr rename_vars(const ExprPtr& e, const std::map<VarId, VarId>& rename);

/// Alpha-invariant textual key; equal keys mean the abstractions are equal up
/// to a renaming of variables.
std::string canonical_key(const ValueAbstraction& a);

/// Debug rendering with raw ids.
std::string debug_string(const Expr& e);
std::string debug_string(const CorePattern& p);
std::string debug_string(const Constraint& c);
std::string debug_string(const ValueAbstraction& a);

}  // namespace patcheck

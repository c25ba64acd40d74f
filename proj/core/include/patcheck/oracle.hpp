#pragma once

// Satisfiability over-approximation for constraint sets. Only an `unsat`
// verdict may remove an abstraction; `sat` and `unknown` both keep it.

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "patcheck/abstraction.hpp"

namespace patcheck {

struct ModelEntry {
  std::string key;   // solver symbol key
  VarId var = 0;     // set for plain variables
  ExprPtr atom;      // set for opaque atoms
  bool is_bool = false;
  std::string value;
};

struct SolverVerdict {
  enum class Kind { Unsat, Sat, Unknown };

  Kind kind = Kind::Sat;
  std::optional<std::vector<ModelEntry>> model;  // Sat only, when a model is known
  std::string reason;                            // Unknown / Unsat explanation

  static SolverVerdict unsat(std::string why = {});
  static SolverVerdict sat(std::optional<std::vector<ModelEntry>> model = std::nullopt);
  static SolverVerdict unknown(std::string why);

  bool satisfiable() const { return kind != Kind::Unsat; }
};

// ---- translated formulas ---------------------------------------------------

/// Linear integer term: sum of coeff * symbol, plus a constant.
struct LinearTerm {
  std::map<std::string, Integer> coeffs;
  Integer constant = 0;

  bool is_constant() const { return coeffs.empty(); }
  LinearTerm& operator+=(const LinearTerm& o);
  LinearTerm& operator*=(const Integer& k);
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_string(CmpOp op);
CmpOp negate(CmpOp op);

/// Quantifier-free formula over Boolean symbols and linear integer comparisons.
struct Formula {
  enum class Kind { True, False, BoolVar, Not, And, Or, Iff, Cmp };

  Kind kind = Kind::True;
  std::string key;  // BoolVar symbol
  std::vector<Formula> args;
  CmpOp op = CmpOp::Eq;
  LinearTerm lhs;
  LinearTerm rhs;

  static Formula constant(bool v);
  static Formula var(std::string key);
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula iff(Formula a, Formula b);
  static Formula compare(CmpOp op, LinearTerm l, LinearTerm r);

  std::string to_string() const;
};

struct SolverSymbol {
  std::string key;
  bool is_bool = false;
  VarId var = 0;   // plain variable
  ExprPtr atom;    // opaque sub-expression
};

struct Translation {
  std::vector<Formula> conjuncts;
  std::vector<SolverSymbol> symbols;  // declaration order
  std::size_t opaque_nonlinear = 0;   // products degraded to opaque atoms
};

// ---- pipeline stages -------------------------------------------------------

/// Resolve variable equalities (union-find, lowest id is the representative)
/// and substitute the representative everywhere. Guard equalities whose
/// right-hand side is a bare variable count as variable equalities. Two
/// constructor equalities on the same variable with the same constructor
/// equate their arguments.
std::vector<Constraint> saturate_var_equalities(std::vector<Constraint> delta);

/// The renaming saturate_var_equalities applies: variable -> representative,
/// for every variable that is not its own representative.
std::map<VarId, VarId> variable_representatives(const std::vector<Constraint>& delta);

struct BottomCheck {
  bool unsat = false;
  std::vector<Constraint> remaining;  // bottom assertions removed
};

/// A bottom assertion contradicts any evidence that its variable was
/// evaluated: a constructor equality on it, a strict occurrence inside a guard
/// whose result is known, or a guard equality with a closed expression.
/// Expects saturated input.
BottomCheck bottom_conflict(const std::vector<Constraint>& delta);

/// Only checks syntactic type equality.
bool types_consistent(const std::vector<Constraint>& delta);

/// Constructor clash on one variable makes the result `nullopt` (unsat).
std::optional<Translation> translate(const std::vector<Constraint>& delta, const TypingEnv& env);

struct SolverLimits {
  std::size_t max_int_vars = 8;
  std::size_t max_search_nodes = 200000;
  std::size_t max_candidates_per_var = 64;
};

SolverVerdict builtin_solve(const Translation& t, const SolverLimits& limits = {});

/// SMT-LIB 2 text (QF_LIA) for the translated problem.
std::string emit_smtlib(const Translation& t);

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool failed_to_start = false;
  std::string output;
};

/// Run `command_template` through /bin/sh with `{file}` replaced by the path
/// of a temporary file containing `input` (appended when absent).
ProcessResult run_solver_process(const std::string& command_template, const std::string& input,
                                 std::chrono::milliseconds timeout);

/// Map solver output to a verdict; anything but a leading sat/unsat line is
/// unknown.
SolverVerdict parse_solver_output(const ProcessResult& r);

// ---- oracle ----------------------------------------------------------------

enum class OracleBackend { Trivial, Builtin, External };

struct OracleConfig {
  OracleBackend backend = OracleBackend::Builtin;
  std::string command;  // External only
  std::chrono::milliseconds timeout{2000};
  SolverLimits limits;
};

/// Not thread-safe; give each worker its own instance.
class Oracle {
 public:
  explicit Oracle(OracleConfig config = {});

  SolverVerdict check_sat(const std::vector<Constraint>& delta, const TypingEnv& env);
  SolverVerdict check(const ValueAbstraction& a) { return check_sat(a.constraints, a.env); }

  const OracleConfig& config() const { return config_; }
  std::size_t queries() const { return queries_; }
  std::size_t cache_hits() const { return cache_hits_; }
  /// Backend failures (crash, timeout, malformed output) seen so far.
  std::size_t backend_failures() const { return backend_failures_; }

 private:
  SolverVerdict run_pipeline(const std::vector<Constraint>& delta, const TypingEnv& env);

  OracleConfig config_;
  std::unordered_map<std::string, SolverVerdict> cache_;
  std::unordered_map<std::string, std::vector<VarId>> cache_order_;  // variable order of the cached query
  std::size_t queries_ = 0;
  std::size_t cache_hits_ = 0;
  std::size_t backend_failures_ = 0;
};

/// Alpha-invariant cache key of a constraint set (types of variables included).
std::string canonical_constraint_key(const std::vector<Constraint>& delta, const TypingEnv& env);

std::string_view to_string(OracleBackend b);

}  // namespace patcheck

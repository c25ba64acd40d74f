#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "patcheck/abstraction.hpp"
#include "patcheck/syntax.hpp"

namespace patcheck {

/// Rendering hints for variables introduced by desugaring. Constructor sugar
/// (lists, tuples) is carried by ConstructorSig::sugar.
struct ResugarMap {
  std::map<VarId, std::string> names;    // user-written pattern variable names
  std::map<VarId, Integer> literals;     // variables standing for an integer literal
  std::map<VarId, std::string> origins;  // id -> "clause N" provenance, for JSON consumers

  void merge(const ResugarMap& other);
  friend bool operator==(const ResugarMap&, const ResugarMap&) = default;
};

struct DesugaredClause {
  std::vector<CorePattern> patterns;  // arity elements plus guard elements
  std::size_t source_index = 0;       // 1-based index in the function's clause list
  SourceSpan span;
  std::string rendered;               // clause head as written, e.g. "bguard x | otherwise"
};

struct DesugaredFunction {
  std::string name;
  std::vector<TypeExpr> arg_types;
  TypeExpr result_type;
  std::vector<DesugaredClause> clauses;
  SourceSpan span;
};

/// Lower one clause: wildcards become fresh variables, integer literal k
/// becomes a variable x followed by the guard element (True <- x == k), list
/// and tuple sugar become constructor patterns, and a clause guard e becomes a
/// trailing (True <- e) element.
std::vector<CorePattern> desugar_clause(const Program& program, const Clause& clause, NameSupply& fresh,
                                        ResugarMap& names);

DesugaredFunction desugar_function(const Program& program, const FunctionDef& fn, NameSupply& fresh,
                                   ResugarMap& names);

/// Range facts for bounded numeric types (Word8: 0 <= v <= 255).
std::vector<Constraint> range_postulates(const Program& program, const TypeExpr& type, VarId v);

/// Render a value-abstraction pattern in source syntax. `name` gives the
/// display name of each variable.
std::string resugar(const CorePattern& p, const std::function<std::string(VarId)>& name, bool atomic = false);
std::string resugar(const CorePattern& p, const ResugarMap& m, bool atomic = false);

}  // namespace patcheck

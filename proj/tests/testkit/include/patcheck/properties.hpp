#pragma once

// Checks of the analysis against the brute-force matcher. Each returns a list
// of human-readable violations; empty means the property held.

#include <cstddef>
#include <string>
#include <vector>

#include "patcheck/analysis.hpp"
#include "patcheck/testkit.hpp"

namespace patcheck::testkit {

struct PropertyOptions {
  int depth = 3;
  IntWindow window;
  OracleConfig oracle;     // backend for the soundness checks
  std::size_t cap = 10000;
};

struct PropertyResult {
  std::vector<std::string> violations;
  std::size_t functions = 0;
  std::size_t vectors = 0;
  std::size_t incomplete = 0;  // functions that hit the abstraction cap
  double worst_ratio = 0;      // produced / complexity bound

  void merge(const PropertyResult& o);
};

struct AnalyzedFunction {
  DesugaredFunction function;
  std::vector<TypeExpr> arg_types;
  FunctionAnalysis analysis;
};

/// Desugars and analyzes every function of a checked program.
std::vector<AnalyzedFunction> analyze_all(const Program& program, const OracleConfig& oracle, std::size_t cap);

/// U_n empty => nothing falls through; redundant => deleting the clause
/// changes no outcome; inaccessible => the clause never matches.
PropertyResult check_soundness(const Program& program, const PropertyOptions& options);

/// Every matched / fell-through / diverged vector is denoted by an abstraction
/// of C_i / U_n / D_i computed with the trivial oracle.
PropertyResult check_partition(const Program& program, const PropertyOptions& options);

/// produced <= factor * complexity_bound for every function.
PropertyResult check_complexity(const Program& program, double factor, std::size_t cap = 10000);

/// The desugared clauses match exactly like the surface clauses.
PropertyResult check_desugaring(const Program& program, const PropertyOptions& options);

/// Every evaluatedness entry is realized by a vector with bottom at the marked
/// positions on which matching diverges; every diverging vector is denoted by
/// an entry's divergent abstraction.
PropertyResult check_evaluatedness(const Program& program, const PropertyOptions& options);

}  // namespace patcheck::testkit

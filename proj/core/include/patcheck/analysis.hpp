#pragma once

// Clause-by-clause computation of covered (C), uncovered (U) and divergent (D)
// value abstractions.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "patcheck/abstraction.hpp"
#include "patcheck/desugar.hpp"
#include "patcheck/oracle.hpp"

namespace patcheck {

/// Thrown when a function produces more abstractions than the configured cap.
class AnalysisCapExceeded : public std::runtime_error {
 public:
  AnalysisCapExceeded() : std::runtime_error("abstraction cap exceeded") {}
};

struct AlgorithmContext {
  const Program& program;
  NameSupply& names;
  std::size_t cap = 10000;
  std::size_t produced = 0;

  /// Counts `n` new abstractions; throws once the total passes the cap.
  void charge(std::size_t n);
};

/// The most general abstraction for the given argument types: fresh variables
/// plus range facts for bounded numerics.
ValueAbstraction initial_abstraction(AlgorithmContext& ctx, const std::vector<TypeExpr>& arg_types);

/// Unfiltered single-step results for one clause vector against one value
/// abstraction. No oracle involved.
std::vector<ValueAbstraction> covered(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                      const ValueAbstraction& va);
std::vector<ValueAbstraction> uncovered(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                        const ValueAbstraction& va);
std::vector<ValueAbstraction> divergent(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                        const ValueAbstraction& va);

struct DivergentEntry {
  ValueAbstraction abstraction;
  std::size_t source = 0;  // index into the uncovered set the clause was checked against
};

struct ClauseAnalysis {
  std::size_t source_index = 0;  // 1-based
  std::vector<ValueAbstraction> covered;
  std::vector<ValueAbstraction> uncovered;  // U_i, input of the next clause
  std::vector<DivergentEntry> divergent;
};

struct FunctionAnalysis {
  std::string name;
  DesugaredFunction function;
  std::vector<ValueAbstraction> initial;  // U_0
  std::vector<ClauseAnalysis> clauses;
  std::vector<ValueAbstraction> missing;  // U_n
  std::vector<SolverVerdict> missing_verdicts;
  bool incomplete = false;     // abstraction cap exceeded; no diagnostics
  bool degraded = false;       // the oracle backend failed at least once
  std::size_t unknown_verdicts = 0;
  std::size_t produced = 0;

  /// Uncovered set a clause (0-based position) was checked against.
  const std::vector<ValueAbstraction>& before(std::size_t clause) const {
    return clause == 0 ? initial : clauses[clause - 1].uncovered;
  }
};

struct AnalysisOptions {
  std::size_t cap = 10000;
};

/// Runs the per-clause iteration with oracle filtering and alpha-equivalence
/// deduplication.
FunctionAnalysis analyze_function(const Program& program, const DesugaredFunction& fn, NameSupply& names,
                                  Oracle& oracle, const AnalysisOptions& options = {});

/// n * m * c^m, with n clauses, m the largest number of pattern nodes (guards
/// included) in one clause vector, and c the largest constructor count met
/// (2 for guards). Compared against AlgorithmContext::produced.
double complexity_bound(const Program& program, const DesugaredFunction& fn);

}  // namespace patcheck

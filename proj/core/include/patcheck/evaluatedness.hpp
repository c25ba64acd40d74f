#pragma once

// Which argument positions pattern matching forces, per input shape.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patcheck/analysis.hpp"

namespace patcheck {

struct EvaluatednessEntry {
  std::size_t clause_index = 0;       // 1-based clause whose matching forces the positions
  std::vector<CorePattern> shape;     // uncovered abstraction the clause was checked against
  std::vector<CorePattern> refined;   // divergent abstraction, same arity as `shape`
  std::set<VarId> forced;             // variables of `refined` evaluated to head normal form
};

/// Pairs every divergent abstraction with its source shape. A variable is
/// forced when its equality class carries a bottom assertion, or when a guard
/// whose result diverges is strict in it. Identical entries are merged.
std::vector<EvaluatednessEntry> compute_evaluatedness(const FunctionAnalysis& analysis);

/// Display form: header "f a b", then one (label, marking) pair per argument.
struct RenderedEvaluatedness {
  std::string shape;
  std::vector<std::pair<std::string, std::string>> arguments;

  friend bool operator==(const RenderedEvaluatedness&, const RenderedEvaluatedness&) = default;
};

RenderedEvaluatedness render_evaluatedness(const std::string& function, const EvaluatednessEntry& entry);

/// Multi-line text block: the header, then "label: marking" lines with labels
/// padded to a common width.
std::string to_text(const RenderedEvaluatedness& r);

}  // namespace patcheck

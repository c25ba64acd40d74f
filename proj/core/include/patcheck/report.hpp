#pragma once

// Diagnostics, text rendering and the JSON report format.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "patcheck/analysis.hpp"
#include "patcheck/desugar.hpp"
#include "patcheck/evaluatedness.hpp"

namespace patcheck {

struct ModelLine {
  std::string name;   // "x", "isPrime x"
  std::string value;  // "0", "True"
  std::string type;   // "Int", "Bool"

  friend bool operator==(const ModelLine&, const ModelLine&) = default;
};

struct Witness {
  std::string pattern;                   // "abs x"
  std::vector<std::string> constraints;  // "~a == x < 0"
  std::optional<std::vector<ModelLine>> model;
  std::string certainty;  // "model_found" or "over_approx"

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Diagnostic {
  enum class Kind { MissingClauses, RedundantClause, InaccessibleRhs, AnalysisIncomplete };
  enum class Severity { Warning, Info };

  Kind kind = Kind::MissingClauses;
  Severity severity = Severity::Warning;
  std::string function;
  std::string file;
  SourceSpan span;
  std::size_t clause_index = 0;  // redundant / inaccessible only, 1-based
  std::string rendered;          // clause head for redundant / inaccessible
  std::vector<Witness> witnesses;
  std::string reason;            // analysis_incomplete only

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct FunctionReport {
  std::string name;
  std::string file;
  SourceSpan span;
  std::vector<Diagnostic> diagnostics;
  std::vector<RenderedEvaluatedness> evaluatedness;
  std::vector<std::string> notes;  // informational, e.g. oracle degradation
  ResugarMap resugar;              // display hints for the function's variables

  friend bool operator==(const FunctionReport&, const FunctionReport&) = default;
};

std::string_view to_string(Diagnostic::Kind k);
std::optional<Diagnostic::Kind> diagnostic_kind_from_string(std::string_view s);

/// Missing clauses when U_n is not empty; for clauses with C_i empty,
/// redundant if D_i is empty and inaccessible otherwise.
std::vector<Diagnostic> diagnose(const FunctionAnalysis& analysis, const ResugarMap& names,
                                 const std::string& file);

/// Everything shown for one function: diagnostics, optional evaluatedness
/// blocks, and notes.
FunctionReport build_function_report(const FunctionAnalysis& analysis, const ResugarMap& names,
                                     const std::string& file, bool with_evaluatedness);

struct TextOptions {
  std::size_t max_witnesses = 16;
  bool evaluatedness = false;
};

std::string render_text(const std::vector<FunctionReport>& reports, const TextOptions& options = {});
std::string render_text(const Diagnostic& d, std::size_t max_witnesses = 16);

/// {"version": 1, "functions": [...]}; only functions with something to
/// report are listed.
std::string render_json(const std::vector<FunctionReport>& reports);

/// Inverse of render_json. Throws std::runtime_error on malformed input.
std::vector<FunctionReport> parse_json_report(const std::string& text);

/// Whether any diagnostic has warning severity.
bool has_warnings(const std::vector<FunctionReport>& reports);

}  // namespace patcheck

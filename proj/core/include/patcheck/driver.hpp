#pragma once

// End-to-end analysis of one source file: parse, check, desugar, analyze,
// report. Functions are analyzed independently, optionally in parallel.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "patcheck/analysis.hpp"
#include "patcheck/oracle.hpp"
#include "patcheck/report.hpp"
#include "patcheck/syntax.hpp"

namespace patcheck {

struct DriverOptions {
  OracleConfig oracle;
  AnalysisOptions analysis;
  bool evaluatedness = false;
  std::size_t jobs = 1;
};

struct FileResult {
  std::string file;
  std::vector<SourceError> errors;  // parse / semantic errors; no analysis when non-empty
  std::vector<FunctionReport> functions;
  std::size_t internal_errors = 0;  // functions whose analysis threw
};

/// Analyzes every function of a checked program. An internal failure in one
/// function becomes an analysis_incomplete diagnostic for that function.
FileResult analyze_program(const Program& program, const std::string& file, const DriverOptions& options);

FileResult analyze_source(std::string_view source, const std::string& file, const DriverOptions& options);

}  // namespace patcheck

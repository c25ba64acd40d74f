#include "patcheck/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "patcheck/driver.hpp"

namespace patcheck {

namespace {

constexpr const char* kDefaultSolver = "z3 -smt2 {file}";

bool parse_oracle(const std::string& choice, OracleConfig& config) {
  if (choice == "trivial") {
    config.backend = OracleBackend::Trivial;
  } else if (choice == "builtin") {
    config.backend = OracleBackend::Builtin;
  } else if (choice == "external") {
    config.backend = OracleBackend::External;
    config.command = kDefaultSolver;
  } else if (choice.rfind("external:", 0) == 0 && choice.size() > 9) {
    config.backend = OracleBackend::External;
    config.command = choice.substr(9);
  } else {
    return false;
  }
  if (config.backend == OracleBackend::External) {
    if (const char* env = std::getenv("PATCHECK_SOLVER"); env && *env) config.command = env;
  }
  return true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern-match exhaustiveness, redundancy and evaluatedness checker for MiniFun", "patcheck"};
  std::vector<std::string> inputs;
  std::string oracle = "builtin";
  long long timeout_ms = 2000;
  long long cap = 10000;
  std::string format = "text";
  bool evaluatedness = false;
  long long max_witnesses = 16;
  unsigned hw = std::thread::hardware_concurrency();
  long long jobs = hw ? hw : 1;

  app.add_option("inputs", inputs, "MiniFun source files (.mf)")->required();
  app.add_option("--oracle", oracle, "trivial, builtin or external:CMD ({file} is replaced by the problem path)");
  app.add_option("--timeout", timeout_ms, "External solver timeout in milliseconds")->check(CLI::NonNegativeNumber);
  app.add_option("--cap", cap, "Maximum number of value abstractions per function")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--evaluatedness", evaluatedness, "Show which arguments pattern matching evaluates");
  app.add_option("--max-witnesses", max_witnesses, "Witnesses shown per missing-clauses warning")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "Functions analyzed in parallel")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  DriverOptions options;
  if (!parse_oracle(oracle, options.oracle)) {
    err << "patcheck: unknown oracle '" << oracle << "' (expected trivial, builtin or external:CMD)\n";
    return 2;
  }
  options.oracle.timeout = std::chrono::milliseconds(timeout_ms);
  options.analysis.cap = static_cast<std::size_t>(cap);
  options.evaluatedness = evaluatedness;
  options.jobs = static_cast<std::size_t>(jobs);

  int code = 0;
  std::vector<FunctionReport> reports;
  try {
    for (const auto& path : inputs) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        err << "patcheck: cannot read '" << path << "'\n";
        code = std::max(code, 2);
        continue;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      FileResult r = analyze_source(buf.str(), path, options);
      if (!r.errors.empty()) {
        for (const auto& e : r.errors) err << e.to_string(path) << "\n";
        code = std::max(code, 2);
        continue;
      }
      if (r.internal_errors) code = std::max(code, 3);
      for (auto& f : r.functions) reports.push_back(std::move(f));
    }
  } catch (const std::exception& e) {
    err << "patcheck: internal error: " << e.what() << "\n";
    return 3;
  }

  if (format == "json") {
    out << render_json(reports);
  } else {
    TextOptions t;
    t.max_witnesses = static_cast<std::size_t>(max_witnesses);
    t.evaluatedness = evaluatedness;
    out << render_text(reports, t);
  }
  if (code == 0 && has_warnings(reports)) code = 1;
  return code;
}

}  // namespace patcheck

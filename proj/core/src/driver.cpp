#include "patcheck/driver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "patcheck/desugar.hpp"

namespace patcheck {

namespace {

FunctionReport analyze_one(const Program& program, std::size_t index, const std::string& file,
                           const DriverOptions& options, Oracle& oracle, bool& failed) {
  const FunctionDef& fn = program.functions[index];
  try {
    NameSupply names = NameSupply::for_function(index);
    ResugarMap resugar;
    DesugaredFunction dfn = desugar_function(program, fn, names, resugar);
    FunctionAnalysis analysis = analyze_function(program, dfn, names, oracle, options.analysis);
    return build_function_report(analysis, resugar, file, options.evaluatedness);
  } catch (const std::exception& e) {
    failed = true;
    FunctionReport r;
    r.name = fn.name;
    r.file = file;
    r.span = fn.span;
    Diagnostic d;
    d.kind = Diagnostic::Kind::AnalysisIncomplete;
    d.function = fn.name;
    d.file = file;
    d.span = fn.span;
    d.reason = std::string("internal error: ") + e.what();
    r.diagnostics.push_back(std::move(d));
    return r;
  }
}

}  // namespace

FileResult analyze_program(const Program& program, const std::string& file, const DriverOptions& options) {
  FileResult out;
  out.file = file;
  const std::size_t n = program.functions.size();
  out.functions.resize(n);
  std::vector<char> failed(n, 0);
  std::size_t workers = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    Oracle oracle(options.oracle);
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      bool f = false;
      out.functions[i] = analyze_one(program, i, file, options, oracle, f);
      failed[i] = f;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  out.internal_errors = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return out;
}

FileResult analyze_source(std::string_view source, const std::string& file, const DriverOptions& options) {
  auto loaded = load_program(source, file);
  if (!loaded.ok()) {
    FileResult out;
    out.file = file;
    out.errors = std::move(loaded.errors);
    return out;
  }
  return analyze_program(*loaded.value, file, options);
}

}  // namespace patcheck

#include "patcheck/properties.hpp"

#include <algorithm>
#include <sstream>

#include "patcheck/evaluatedness.hpp"

namespace patcheck::testkit {

void PropertyResult::merge(const PropertyResult& o) {
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  functions += o.functions;
  vectors += o.vectors;
  incomplete += o.incomplete;
  worst_ratio = std::max(worst_ratio, o.worst_ratio);
}

std::vector<AnalyzedFunction> analyze_all(const Program& program, const OracleConfig& config, std::size_t cap) {
  std::vector<AnalyzedFunction> out;
  Oracle oracle(config);
  for (std::size_t i = 0; i < program.functions.size(); ++i) {
    const FunctionDef& fn = program.functions[i];
    NameSupply names = NameSupply::for_function(i);
    ResugarMap resugar;
    AnalyzedFunction a;
    a.function = desugar_function(program, fn, names, resugar);
    a.arg_types = a.function.arg_types;
    a.analysis = analyze_function(program, a.function, names, oracle, AnalysisOptions{cap});
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

std::string where(const AnalyzedFunction& f, const std::vector<Value>& v) {
  return f.function.name + " " + to_string(v);
}

bool any_denotes(const std::vector<ValueAbstraction>& set, const std::vector<Value>& v) {
  return std::any_of(set.begin(), set.end(), [&](const ValueAbstraction& a) { return denotes(a, v); });
}

const ClauseAnalysis* clause_by_index(const FunctionAnalysis& a, std::size_t source_index) {
  for (const auto& c : a.clauses)
    if (c.source_index == source_index) return &c;
  return nullptr;
}

std::vector<DesugaredClause> without(const std::vector<DesugaredClause>& cs, std::size_t source_index) {
  std::vector<DesugaredClause> out;
  for (const auto& c : cs)
    if (c.source_index != source_index) out.push_back(c);
  return out;
}

}  // namespace

PropertyResult check_soundness(const Program& program, const PropertyOptions& options) {
  PropertyResult r;
  for (const auto& f : analyze_all(program, options.oracle, options.cap)) {
    ++r.functions;
    if (f.analysis.incomplete) {
      ++r.incomplete;
      continue;
    }
    std::vector<std::size_t> redundant, inaccessible;
    for (const auto& c : f.analysis.clauses) {
      if (!c.covered.empty()) continue;
      (c.divergent.empty() ? redundant : inaccessible).push_back(c.source_index);
    }
    std::vector<std::vector<DesugaredClause>> deleted;
    for (std::size_t i : redundant) deleted.push_back(without(f.function.clauses, i));

    for (const auto& v : enumerate_vectors(program, f.arg_types, options.depth, options.window)) {
      ++r.vectors;
      MatchOutcome o = lazy_match(f.function.clauses, v);
      if (o.kind == MatchOutcome::Kind::Excluded) continue;
      if (o.kind == MatchOutcome::Kind::FellThrough && f.analysis.missing.empty())
        r.violations.push_back("exhaustive but falls through: " + where(f, v));
      if (o.kind == MatchOutcome::Kind::Matched &&
          std::find(inaccessible.begin(), inaccessible.end(), o.clause) != inaccessible.end())
        r.violations.push_back("inaccessible clause " + std::to_string(o.clause) + " matched: " + where(f, v));
      for (std::size_t k = 0; k < redundant.size(); ++k) {
        MatchOutcome d = lazy_match(deleted[k], v);
        if (!(d == o))
          r.violations.push_back("deleting redundant clause " + std::to_string(redundant[k]) + " changes " +
                                 to_string(o) + " to " + to_string(d) + ": " + where(f, v));
      }
    }
  }
  return r;
}

PropertyResult check_partition(const Program& program, const PropertyOptions& options) {
  PropertyResult r;
  OracleConfig trivial;
  trivial.backend = OracleBackend::Trivial;
  for (const auto& f : analyze_all(program, trivial, options.cap)) {
    ++r.functions;
    if (f.analysis.incomplete) {
      ++r.incomplete;
      continue;
    }
    for (const auto& v : enumerate_vectors(program, f.arg_types, options.depth, options.window)) {
      ++r.vectors;
      MatchOutcome o = lazy_match(f.function.clauses, v);
      switch (o.kind) {
        case MatchOutcome::Kind::Excluded:
          break;
        case MatchOutcome::Kind::FellThrough:
          if (!any_denotes(f.analysis.missing, v)) r.violations.push_back("U_n misses " + where(f, v));
          break;
        case MatchOutcome::Kind::Matched: {
          const ClauseAnalysis* c = clause_by_index(f.analysis, o.clause);
          if (!c || !any_denotes(c->covered, v))
            r.violations.push_back("C_" + std::to_string(o.clause) + " misses " + where(f, v));
          break;
        }
        case MatchOutcome::Kind::Diverged: {
          const ClauseAnalysis* c = clause_by_index(f.analysis, o.clause);
          bool found = false;
          if (c)
            for (const auto& d : c->divergent) found = found || denotes(d.abstraction, v);
          if (!found) r.violations.push_back("D_" + std::to_string(o.clause) + " misses " + where(f, v));
          break;
        }
      }
    }
  }
  return r;
}

PropertyResult check_complexity(const Program& program, double factor, std::size_t cap) {
  PropertyResult r;
  OracleConfig builtin;
  for (const auto& f : analyze_all(program, builtin, cap)) {
    ++r.functions;
    if (f.analysis.incomplete) {
      ++r.incomplete;
      r.violations.push_back(f.function.name + ": abstraction cap exceeded");
      continue;
    }
    double bound = complexity_bound(program, f.function);
    double ratio = static_cast<double>(f.analysis.produced) / bound;
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (ratio > factor) {
      std::ostringstream s;
      s << f.function.name << ": produced " << f.analysis.produced << " > " << factor << " * " << bound;
      r.violations.push_back(s.str());
    }
  }
  return r;
}

PropertyResult check_desugaring(const Program& program, const PropertyOptions& options) {
  PropertyResult r;
  for (std::size_t i = 0; i < program.functions.size(); ++i) {
    const FunctionDef& fn = program.functions[i];
    NameSupply names = NameSupply::for_function(i);
    ResugarMap resugar;
    DesugaredFunction d = desugar_function(program, fn, names, resugar);
    ++r.functions;
    for (const auto& v : enumerate_vectors(program, d.arg_types, options.depth, options.window)) {
      ++r.vectors;
      MatchOutcome a = lazy_match(d.clauses, v);
      MatchOutcome b = lazy_match_surface(program, fn, v);
      if (!(a == b))
        r.violations.push_back("desugared " + to_string(a) + " vs surface " + to_string(b) + ": " + fn.name + " " +
                               to_string(v));
    }
  }
  return r;
}

PropertyResult check_evaluatedness(const Program& program, const PropertyOptions& options) {
  PropertyResult r;
  for (const auto& f : analyze_all(program, options.oracle, options.cap)) {
    ++r.functions;
    if (f.analysis.incomplete) {
      ++r.incomplete;
      continue;
    }
    auto vectors = enumerate_vectors(program, f.arg_types, options.depth, options.window);
    std::vector<MatchOutcome> outcomes;
    for (const auto& v : vectors) outcomes.push_back(lazy_match(f.function.clauses, v));
    r.vectors += vectors.size();

    auto entries = compute_evaluatedness(f.analysis);
    for (const auto& e : entries) {
      const ClauseAnalysis* c = clause_by_index(f.analysis, e.clause_index);
      bool realized = false;
      for (std::size_t k = 0; k < vectors.size() && !realized && c; ++k) {
        if (!(outcomes[k].kind == MatchOutcome::Kind::Diverged && outcomes[k].clause == e.clause_index)) continue;
        for (const auto& d : c->divergent) {
          if (denotes(d.abstraction, vectors[k]) && d.abstraction.patterns == e.refined) {
            realized = true;
            break;
          }
        }
      }
      if (!realized)
        r.violations.push_back(f.function.name + ": evaluatedness entry for clause " +
                               std::to_string(e.clause_index) + " has no diverging input");
    }
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      if (outcomes[k].kind != MatchOutcome::Kind::Diverged) continue;
      bool covered = false;
      for (const auto& e : entries) {
        if (e.clause_index != outcomes[k].clause) continue;
        const ClauseAnalysis* c = clause_by_index(f.analysis, e.clause_index);
        for (const auto& d : c->divergent)
          covered = covered || (d.abstraction.patterns == e.refined && denotes(d.abstraction, vectors[k]));
      }
      if (!covered) r.violations.push_back("diverging input without marking: " + where(f, vectors[k]));
    }
  }
  return r;
}

}  // namespace patcheck::testkit

#include "patcheck/report.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace patcheck {

using json = nlohmann::ordered_json;

std::string_view to_string(Diagnostic::Kind k) {
  switch (k) {
    case Diagnostic::Kind::MissingClauses: return "missing_clauses";
    case Diagnostic::Kind::RedundantClause: return "redundant_clause";
    case Diagnostic::Kind::InaccessibleRhs: return "inaccessible_rhs";
    case Diagnostic::Kind::AnalysisIncomplete: return "analysis_incomplete";
  }
  return "?";
}

std::optional<Diagnostic::Kind> diagnostic_kind_from_string(std::string_view s) {
  for (auto k : {Diagnostic::Kind::MissingClauses, Diagnostic::Kind::RedundantClause,
                 Diagnostic::Kind::InaccessibleRhs, Diagnostic::Kind::AnalysisIncomplete}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

// ---- witnesses ---------------------------------------------------------------

namespace {

std::string tilde_name(std::size_t i) {
  std::string s = "~";
  s += static_cast<char>('a' + i % 26);
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

const Integer* literal_of(const Expr& e, VarId rep) {
  if (e.kind != Expr::Kind::Binary || e.binary_op != BinaryOp::Eq) return nullptr;
  const Expr& l = e.args[0];
  const Expr& r = e.args[1];
  if (l.kind == Expr::Kind::Var && l.var == rep && r.kind == Expr::Kind::Int) return &r.int_value;
  if (r.kind == Expr::Kind::Var && r.var == rep && l.kind == Expr::Kind::Int) return &l.int_value;
  return nullptr;
}

class WitnessRenderer {
 public:
  WitnessRenderer(const ValueAbstraction& w, const ResugarMap& names)
      : w_(w), names_(names), reps_(variable_representatives(w.constraints)),
        saturated_(saturate_var_equalities(w.constraints)) {
    for (const auto& [v, r] : reps_) members_[r].push_back(v);
    for (auto& [r, ms] : members_) {
      ms.push_back(r);
      std::sort(ms.begin(), ms.end());
    }
  }

  VarId rep(VarId v) const {
    auto it = reps_.find(v);
    return it == reps_.end() ? v : it->second;
  }

  std::string name(VarId v) {
    VarId r = rep(v);
    if (auto it = display_.find(r); it != display_.end()) return it->second;
    std::string n = choose_name(r);
    display_[r] = n;
    return n;
  }

  Witness render(const std::string& function, const SolverVerdict& verdict) {
    Witness out;
    std::vector<VarId> vars;
    for (const auto& p : w_.patterns) collect_vars(p, vars);
    std::set<VarId> visible;
    for (VarId v : vars) visible.insert(rep(v));
    std::set<VarId> refined;  // already spelled out as constructors in the pattern
    for (const auto& p : w_.patterns) collect_origins(p, refined);

    out.pattern = function;
    for (const auto& p : w_.patterns) {
      out.pattern += " " + resugar(p, [this](VarId v) { return atomic_name(v); }, true);
    }

    // Constraints connected to the witness variables.
    std::vector<const Constraint*> candidates;
    for (const auto& c : saturated_) {
      if (c.kind == Constraint::Kind::TermEq) candidates.push_back(&c);
      if (c.kind == Constraint::Kind::ConEq && !visible.count(c.var) && !refined.count(c.var))
        candidates.push_back(&c);
    }
    std::set<VarId> reach = visible;
    std::vector<bool> shown(candidates.size(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (shown[i]) continue;
        std::vector<VarId> cv;
        collect_vars(*candidates[i], cv);
        if (std::none_of(cv.begin(), cv.end(), [&](VarId v) { return reach.count(v); })) continue;
        shown[i] = true;
        changed = true;
        reach.insert(cv.begin(), cv.end());
      }
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (shown[i]) out.constraints.push_back(constraint_text(*candidates[i]));
    }

    if (verdict.kind == SolverVerdict::Kind::Sat && verdict.model) {
      out.certainty = "model_found";
      std::vector<ModelLine> model;
      std::set<VarId> done;
      for (VarId v : vars) {
        VarId r = rep(v);
        if (!done.insert(r).second || is_literal(name(r))) continue;
        for (const auto& e : *verdict.model) {
          if (e.var == r) model.push_back({name(r), e.value, type_name(r)});
        }
      }
      for (const auto& e : *verdict.model) {
        if (!e.atom) continue;
        std::vector<VarId> av;
        collect_vars(*e.atom, av);
        if (std::any_of(av.begin(), av.end(), [&](VarId v) { return !visible.count(v); })) continue;
        model.push_back({pretty_print(display(*e.atom)), e.value, e.is_bool ? "Bool" : "Int"});
      }
      out.model = std::move(model);
    } else {
      out.certainty = "over_approx";
    }
    return out;
  }

 private:
  static bool is_literal(const std::string& n) {
    return !n.empty() && (std::isdigit(static_cast<unsigned char>(n[0])) || n[0] == '-');
  }

  void collect_origins(const CorePattern& p, std::set<VarId>& out) const {
    if (p.is_con() && p.id) out.insert(rep(p.id));
    for (const auto& a : p.args) collect_origins(a, out);
  }

  std::string choose_name(VarId r) {
    // A guard that pins the variable to a literal renders as the literal.
    for (const auto& c : saturated_) {
      if (c.kind != Constraint::Kind::TermEq) continue;
      const Integer* k = literal_of(*c.expr, r);
      if (!k) continue;
      for (const auto& d : saturated_) {
        if (d.kind == Constraint::Kind::ConEq && d.var == c.var && d.con->name == "True") return k->str();
      }
    }
    std::vector<VarId> ms{r};
    if (auto it = members_.find(r); it != members_.end()) ms = it->second;
    for (VarId m : ms) {
      auto it = names_.names.find(m);
      if (it == names_.names.end()) continue;
      if (used_.insert(it->second).second) return it->second;
      break;
    }
    std::string n;
    do {
      n = tilde_name(next_tilde_++);
    } while (!used_.insert(n).second);
    return n;
  }

  std::string atomic_name(VarId v) {
    std::string n = name(v);
    return !n.empty() && n[0] == '-' ? "(" + n + ")" : n;
  }

  std::string type_name(VarId r) const {
    const TypeExpr* t = w_.env.lookup(r);
    return t ? pretty_print(*t) : "?";
  }

  Expr display(const Expr& e) {
    Expr out = e;
    if (out.kind == Expr::Kind::Var && out.var != 0) out.name = name(out.var);
    for (auto& a : out.args) a = display(a);
    return out;
  }

  std::string constraint_text(const Constraint& c) {
    if (c.kind == Constraint::Kind::TermEq) return name(c.var) + " == " + pretty_print(display(*c.expr));
    std::vector<CorePattern> args;
    for (VarId a : c.args) args.push_back(CorePattern::var(a));
    CorePattern k = CorePattern::constructor(c.con, std::move(args));
    return name(c.var) + " == " + resugar(k, [this](VarId v) { return atomic_name(v); }, false);
  }

  const ValueAbstraction& w_;
  const ResugarMap& names_;
  std::map<VarId, VarId> reps_;
  std::vector<Constraint> saturated_;
  std::map<VarId, std::vector<VarId>> members_;
  std::map<VarId, std::string> display_;
  std::set<std::string> used_;
  std::size_t next_tilde_ = 0;
};

}  // namespace

std::vector<Diagnostic> diagnose(const FunctionAnalysis& analysis, const ResugarMap& names, const std::string& file) {
  std::vector<Diagnostic> out;
  const DesugaredFunction& fn = analysis.function;
  if (analysis.incomplete) {
    Diagnostic d;
    d.kind = Diagnostic::Kind::AnalysisIncomplete;
    d.function = fn.name;
    d.file = file;
    d.span = fn.span;
    d.reason = "abstraction cap exceeded; treated as possibly non-exhaustive, no redundancy claims";
    out.push_back(std::move(d));
    return out;
  }
  if (!analysis.missing.empty()) {
    Diagnostic d;
    d.kind = Diagnostic::Kind::MissingClauses;
    d.function = fn.name;
    d.file = file;
    d.span = fn.span;
    for (std::size_t i = 0; i < analysis.missing.size(); ++i) {
      WitnessRenderer r(analysis.missing[i], names);
      d.witnesses.push_back(r.render(fn.name, analysis.missing_verdicts.at(i)));
    }
    out.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < analysis.clauses.size(); ++i) {
    const auto& c = analysis.clauses[i];
    if (!c.covered.empty()) continue;
    const DesugaredClause& dc = fn.clauses.at(i);
    Diagnostic d;
    d.kind = c.divergent.empty() ? Diagnostic::Kind::RedundantClause : Diagnostic::Kind::InaccessibleRhs;
    d.function = fn.name;
    d.file = file;
    d.span = dc.span;
    d.clause_index = dc.source_index;
    d.rendered = dc.rendered;
    out.push_back(std::move(d));
  }
  return out;
}

FunctionReport build_function_report(const FunctionAnalysis& analysis, const ResugarMap& names,
                                     const std::string& file, bool with_evaluatedness) {
  FunctionReport r;
  r.name = analysis.name;
  r.file = file;
  r.span = analysis.function.span;
  r.diagnostics = diagnose(analysis, names, file);
  if (with_evaluatedness) {
    for (const auto& e : compute_evaluatedness(analysis)) r.evaluatedness.push_back(render_evaluatedness(r.name, e));
  }
  r.resugar = names;
  if (analysis.degraded) r.notes.push_back("oracle degraded: results over-approximate further");
  return r;
}

bool has_warnings(const std::vector<FunctionReport>& reports) {
  for (const auto& r : reports)
    for (const auto& d : r.diagnostics)
      if (d.severity == Diagnostic::Severity::Warning) return true;
  return false;
}

// ---- text ----------------------------------------------------------------------

namespace {

std::string location(const std::string& file, const SourceSpan& span) {
  return file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": ";
}

}  // namespace

std::string render_text(const Diagnostic& d, std::size_t max_witnesses) {
  std::string s = location(d.file, d.span);
  s += d.severity == Diagnostic::Severity::Warning ? "warning: " : "info: ";
  switch (d.kind) {
    case Diagnostic::Kind::MissingClauses: {
      s += "The patterns may not be exhaustive, the following clauses are missing:\n";
      std::size_t shown = std::min(max_witnesses, d.witnesses.size());
      for (std::size_t i = 0; i < shown; ++i) {
        const Witness& w = d.witnesses[i];
        s += w.pattern + "\n";
        if (!w.constraints.empty()) {
          s += "Constraints:\n";
          for (const auto& c : w.constraints) s += "  " + c + "\n";
        }
        if (w.model && !w.model->empty()) {
          s += "Satisfiable. Model:\n";
          for (const auto& m : *w.model) s += "  " + m.name + " = " + m.value + " :: " + m.type + "\n";
        }
      }
      if (shown < d.witnesses.size()) s += "... and " + std::to_string(d.witnesses.size() - shown) + " more\n";
      break;
    }
    case Diagnostic::Kind::RedundantClause:
      s += "The following clause is redundant:\n" + d.rendered + "\n";
      break;
    case Diagnostic::Kind::InaccessibleRhs:
      s += "The following clause has an inaccessible right-hand side:\n" + d.rendered + "\n";
      break;
    case Diagnostic::Kind::AnalysisIncomplete:
      s += "Analysis of '" + d.function + "' incomplete: " + d.reason + "\n";
      break;
  }
  return s;
}

std::string render_text(const std::vector<FunctionReport>& reports, const TextOptions& options) {
  std::vector<std::string> blocks;
  for (const auto& r : reports) {
    for (const auto& d : r.diagnostics) blocks.push_back(render_text(d, options.max_witnesses));
    for (const auto& n : r.notes) blocks.push_back(location(r.file, r.span) + "note: " + n + "\n");
    if (options.evaluatedness && !r.evaluatedness.empty()) {
      std::string s = location(r.file, r.span) + "info: Evaluatedness of " + r.name + ":\n";
      for (std::size_t i = 0; i < r.evaluatedness.size(); ++i) {
        if (i) s += "\n";
        s += to_text(r.evaluatedness[i]);
      }
      blocks.push_back(std::move(s));
    }
  }
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += "\n";
    out += blocks[i];
  }
  return out;
}

// ---- JSON ----------------------------------------------------------------------

namespace {

json span_json(const std::string& file, const SourceSpan& s) {
  return json{{"file", file}, {"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

SourceSpan span_from(const json& j) {
  SourceSpan s;
  s.line = j.at("line").get<decltype(s.line)>();
  s.col = j.at("col").get<decltype(s.col)>();
  s.end_line = j.at("end_line").get<decltype(s.end_line)>();
  s.end_col = j.at("end_col").get<decltype(s.end_col)>();
  return s;
}

}  // namespace

std::string render_json(const std::vector<FunctionReport>& reports) {
  json functions = json::array();
  for (const auto& r : reports) {
    if (r.diagnostics.empty() && r.evaluatedness.empty() && r.notes.empty()) continue;
    json diags = json::array();
    for (const auto& d : r.diagnostics) {
      json jd;
      jd["kind"] = std::string(to_string(d.kind));
      jd["severity"] = d.severity == Diagnostic::Severity::Warning ? "warning" : "info";
      jd["span"] = span_json(d.file, d.span);
      if (d.kind == Diagnostic::Kind::RedundantClause || d.kind == Diagnostic::Kind::InaccessibleRhs) {
        jd["clause_index"] = d.clause_index;
        jd["rendered"] = d.rendered;
      }
      if (d.kind == Diagnostic::Kind::MissingClauses) {
        json ws = json::array();
        for (const auto& w : d.witnesses) {
          json jw;
          jw["pattern"] = w.pattern;
          jw["constraints"] = w.constraints;
          if (w.model) {
            json m = json::array();
            for (const auto& line : *w.model) m.push_back({{"name", line.name}, {"value", line.value}, {"type", line.type}});
            jw["model"] = std::move(m);
          } else {
            jw["model"] = nullptr;
          }
          jw["certainty"] = w.certainty;
          ws.push_back(std::move(jw));
        }
        jd["witnesses"] = std::move(ws);
      }
      if (d.kind == Diagnostic::Kind::AnalysisIncomplete) jd["reason"] = d.reason;
      diags.push_back(std::move(jd));
    }
    json evals = json::array();
    for (const auto& e : r.evaluatedness) {
      json args = json::array();
      for (const auto& [label, marking] : e.arguments) args.push_back({{"label", label}, {"marking", marking}});
      evals.push_back({{"shape", e.shape}, {"arguments", std::move(args)}});
    }
    json jf;
    jf["name"] = r.name;
    jf["span"] = span_json(r.file, r.span);
    jf["diagnostics"] = std::move(diags);
    jf["evaluatedness"] = std::move(evals);
    jf["notes"] = r.notes;
    json names = json::object(), literals = json::object(), origins = json::object();
    for (const auto& [v, n] : r.resugar.names) names[std::to_string(v)] = n;
    for (const auto& [v, k] : r.resugar.literals) literals[std::to_string(v)] = k.str();
    for (const auto& [v, o] : r.resugar.origins) origins[std::to_string(v)] = o;
    jf["resugar"] = {{"names", std::move(names)}, {"literals", std::move(literals)}, {"origins", std::move(origins)}};
    functions.push_back(std::move(jf));
  }
  json doc;
  doc["version"] = 1;
  doc["functions"] = std::move(functions);
  return doc.dump(2) + "\n";
}

std::vector<FunctionReport> parse_json_report(const std::string& text) {
  std::vector<FunctionReport> out;
  try {
    json doc = json::parse(text);
    if (doc.at("version").get<int>() != 1) throw std::runtime_error("unsupported report version");
    for (const auto& jf : doc.at("functions")) {
      FunctionReport r;
      r.name = jf.at("name").get<std::string>();
      r.file = jf.at("span").at("file").get<std::string>();
      r.span = span_from(jf.at("span"));
      for (const auto& jd : jf.at("diagnostics")) {
        Diagnostic d;
        auto kind = diagnostic_kind_from_string(jd.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("unknown diagnostic kind");
        d.kind = *kind;
        d.severity = jd.at("severity").get<std::string>() == "warning" ? Diagnostic::Severity::Warning
                                                                         : Diagnostic::Severity::Info;
        d.function = r.name;
        d.file = jd.at("span").at("file").get<std::string>();
        d.span = span_from(jd.at("span"));
        if (jd.contains("clause_index")) d.clause_index = jd.at("clause_index").get<std::size_t>();
        if (jd.contains("rendered")) d.rendered = jd.at("rendered").get<std::string>();
        if (jd.contains("reason")) d.reason = jd.at("reason").get<std::string>();
        if (jd.contains("witnesses")) {
          for (const auto& jw : jd.at("witnesses")) {
            Witness w;
            w.pattern = jw.at("pattern").get<std::string>();
            w.constraints = jw.at("constraints").get<std::vector<std::string>>();
            if (!jw.at("model").is_null()) {
              std::vector<ModelLine> m;
              for (const auto& jm : jw.at("model")) {
                m.push_back({jm.at("name").get<std::string>(), jm.at("value").get<std::string>(),
                             jm.at("type").get<std::string>()});
              }
              w.model = std::move(m);
            }
            w.certainty = jw.at("certainty").get<std::string>();
            d.witnesses.push_back(std::move(w));
          }
        }
        r.diagnostics.push_back(std::move(d));
      }
      for (const auto& je : jf.at("evaluatedness")) {
        RenderedEvaluatedness e;
        e.shape = je.at("shape").get<std::string>();
        for (const auto& ja : je.at("arguments")) {
          e.arguments.emplace_back(ja.at("label").get<std::string>(), ja.at("marking").get<std::string>());
        }
        r.evaluatedness.push_back(std::move(e));
      }
      r.notes = jf.at("notes").get<std::vector<std::string>>();
      if (jf.contains("resugar")) {
        const json& jr = jf.at("resugar");
        auto id = [](const std::string& k) { return static_cast<VarId>(std::stoul(k)); };
        for (const auto& [k, v] : jr.at("names").items()) r.resugar.names[id(k)] = v.get<std::string>();
        for (const auto& [k, v] : jr.at("literals").items()) r.resugar.literals[id(k)] = Integer(v.get<std::string>());
        for (const auto& [k, v] : jr.at("origins").items()) r.resugar.origins[id(k)] = v.get<std::string>();
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  return out;
}

}  // namespace patcheck

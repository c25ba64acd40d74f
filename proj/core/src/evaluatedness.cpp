#include "patcheck/evaluatedness.hpp"

#include <algorithm>
#include <map>

namespace patcheck {

namespace {

VarId find_rep(const std::map<VarId, VarId>& reps, VarId v) {
  auto it = reps.find(v);
  return it == reps.end() ? v : it->second;
}

std::string letter_name(std::size_t i) {
  std::string s(1, static_cast<char>('a' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

std::string key_of(const RenderedEvaluatedness& r) {
  std::string k = r.shape;
  for (const auto& [l, m] : r.arguments) k += "\n" + l + "\t" + m;
  return k;
}

}  // namespace

std::vector<EvaluatednessEntry> compute_evaluatedness(const FunctionAnalysis& analysis) {
  std::vector<EvaluatednessEntry> out;
  if (analysis.incomplete) return out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < analysis.clauses.size(); ++i) {
    const auto& clause = analysis.clauses[i];
    const auto& before = analysis.before(i);
    for (const auto& d : clause.divergent) {
      const ValueAbstraction& a = d.abstraction;
      auto reps = variable_representatives(a.constraints);
      std::set<VarId> bottom_classes;
      for (const auto& c : a.constraints) {
        if (c.kind == Constraint::Kind::Bottom) bottom_classes.insert(find_rep(reps, c.var));
      }
      std::map<VarId, bool> known = known_booleans(a.constraints, [&](VarId v) { return find_rep(reps, v); });
      KnownBool lookup = [&](VarId v) -> std::optional<bool> {
        auto it = known.find(find_rep(reps, v));
        if (it == known.end()) return std::nullopt;
        return it->second;
      };
      // A divergent guard result means its expression was evaluated, and with
      // it every variable the expression is strict in.
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : a.constraints) {
          if (c.kind != Constraint::Kind::TermEq || !bottom_classes.count(find_rep(reps, c.var))) continue;
          std::set<VarId> strict;
          strict_variables(*c.expr, lookup, strict);
          for (VarId v : strict) changed |= bottom_classes.insert(find_rep(reps, v)).second;
        }
      }
      EvaluatednessEntry e;
      e.clause_index = clause.source_index;
      e.shape = before.at(d.source).patterns;
      e.refined = a.patterns;
      std::vector<VarId> vars;
      for (const auto& p : e.refined) collect_vars(p, vars);
      for (VarId v : vars) {
        if (bottom_classes.count(find_rep(reps, v))) e.forced.insert(v);
      }
      if (e.forced.empty()) continue;
      if (!seen.insert(key_of(render_evaluatedness("", e))).second) continue;
      out.push_back(std::move(e));
    }
  }
  return out;
}

RenderedEvaluatedness render_evaluatedness(const std::string& function, const EvaluatednessEntry& entry) {
  std::map<VarId, std::string> letters;
  auto assign = [&](const std::vector<CorePattern>& ps) {
    std::vector<VarId> vars;
    for (const auto& p : ps) collect_vars(p, vars);
    for (VarId v : vars) letters.emplace(v, letter_name(letters.size()));
  };
  assign(entry.shape);
  assign(entry.refined);
  auto plain = [&](VarId v) { return letters.at(v); };
  auto marked = [&](VarId v) { return entry.forced.count(v) ? letters.at(v) : std::string("_"); };

  RenderedEvaluatedness r;
  r.shape = function;
  for (const auto& p : entry.shape) {
    if (!r.shape.empty()) r.shape += " ";
    r.shape += resugar(p, plain, true);
  }
  for (std::size_t i = 0; i < entry.shape.size() && i < entry.refined.size(); ++i) {
    r.arguments.emplace_back(resugar(entry.shape[i], plain, true), resugar(entry.refined[i], marked, false));
  }
  return r;
}

std::string to_text(const RenderedEvaluatedness& r) {
  std::size_t width = 0;
  for (const auto& [label, _] : r.arguments) width = std::max(width, label.size());
  std::string s = r.shape + "\n";
  for (const auto& [label, marking] : r.arguments) {
    s += label + ":" + std::string(width - label.size() + 1, ' ') + marking + "\n";
  }
  return s;
}

}  // namespace patcheck

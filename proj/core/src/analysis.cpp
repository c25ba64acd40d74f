#include "patcheck/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace patcheck {

void AlgorithmContext::charge(std::size_t n) {
  produced += n;
  if (produced > cap) throw AnalysisCapExceeded();
}

namespace {

using Vec = std::vector<CorePattern>;
using Set = std::vector<ValueAbstraction>;

[[noreturn]] void invariant(const std::string& what) { throw std::logic_error("analysis invariant: " + what); }

VarId origin_of(const CorePattern& u) { return u.id; }

const TypeExpr& type_of(const ValueAbstraction& va, VarId v) {
  const TypeExpr* t = va.env.lookup(v);
  if (!t) invariant("unbound variable " + std::to_string(v));
  return *t;
}

/// Replaces the scrutinee variable `x` at the head of `va` with constructor
/// `k` applied to fresh variables.
ValueAbstraction instantiate(AlgorithmContext& ctx, const ValueAbstraction& va, const ConstructorSig& k) {
  const CorePattern& head = va.patterns.front();
  VarId x = head.id;
  const TypeExpr& tx = type_of(va, x);
  const DataDecl* decl = ctx.program.find_data(k.type_name);
  if (!decl) invariant("constructor without type " + k.name);
  std::vector<TypeExpr> targs = tx.kind == TypeExpr::Kind::Con ? tx.args : std::vector<TypeExpr>{};

  ValueAbstraction out;
  out.env = va.env;
  out.constraints = va.constraints;
  std::vector<CorePattern> args;
  std::vector<VarId> ids;
  for (const auto& at : k.arg_types) {
    VarId y = ctx.names.fresh();
    TypeExpr ty = substitute(at, decl->type_params, targs);
    for (auto& c : range_postulates(ctx.program, ty, y)) out.constraints.push_back(std::move(c));
    out.env.bind(y, std::move(ty));
    args.push_back(CorePattern::var(y));
    ids.push_back(y);
  }
  out.constraints.push_back(Constraint::type_eq(substitute(k.result_type, decl->type_params, targs), tx));
  out.constraints.push_back(Constraint::con_eq(x, &k, ids));
  out.patterns.reserve(va.patterns.size());
  out.patterns.push_back(CorePattern::constructor(&k, std::move(args), x));
  out.patterns.insert(out.patterns.end(), va.patterns.begin() + 1, va.patterns.end());
  return out;
}

/// Head constructor split: K u⃗ : w⃗ becomes u⃗ ++ w⃗.
ValueAbstraction flatten_head(const ValueAbstraction& va) {
  ValueAbstraction out;
  out.env = va.env;
  out.constraints = va.constraints;
  const CorePattern& head = va.patterns.front();
  out.patterns = head.args;
  out.patterns.insert(out.patterns.end(), va.patterns.begin() + 1, va.patterns.end());
  return out;
}

/// kcon: rebuild the constructor from the first arity(K) elements.
void kcon(Set& s, const CorePattern& head) {
  std::size_t n = head.con->arity();
  for (auto& va : s) {
    if (va.patterns.size() < n) invariant("kcon on a short vector");
    std::vector<CorePattern> args(std::make_move_iterator(va.patterns.begin()),
                                  std::make_move_iterator(va.patterns.begin() + static_cast<std::ptrdiff_t>(n)));
    va.patterns.erase(va.patterns.begin(), va.patterns.begin() + static_cast<std::ptrdiff_t>(n));
    va.patterns.insert(va.patterns.begin(), CorePattern::constructor(head.con, std::move(args), head.id));
  }
}

/// ucon: put the value `u` back in front.
void ucon(Set& s, const CorePattern& u) {
  for (auto& va : s) va.patterns.insert(va.patterns.begin(), u);
}

void drop_head(Set& s) {
  for (auto& va : s) {
    if (va.patterns.empty()) invariant("tail of an empty vector");
    va.patterns.erase(va.patterns.begin());
  }
}

/// Bind the clause variable `x` to the value `u` (removing u from the front).
ValueAbstraction bind_var(const ValueAbstraction& va, VarId x) {
  const CorePattern& u = va.patterns.front();
  VarId target = u.is_var() ? u.id : origin_of(u);
  if (target == 0) invariant("constructor value without origin");
  ValueAbstraction out;
  out.env = va.env;
  out.env.bind(x, type_of(va, target));
  out.constraints = va.constraints;
  out.constraints.push_back(Constraint::var_eq(x, target));
  out.patterns.assign(va.patterns.begin() + 1, va.patterns.end());
  return out;
}

/// Guard step shared by all three functions: push a fresh Bool y = e.
ValueAbstraction push_guard(AlgorithmContext& ctx, const ValueAbstraction& va, const CorePattern& g) {
  VarId y = ctx.names.fresh();
  ValueAbstraction out;
  out.env = va.env;
  out.env.bind(y, TypeExpr::con("Bool"));
  out.constraints = va.constraints;
  out.constraints.push_back(Constraint::term_eq(y, g.expr));
  out.patterns.reserve(va.patterns.size() + 1);
  out.patterns.push_back(CorePattern::var(y));
  out.patterns.insert(out.patterns.end(), va.patterns.begin(), va.patterns.end());
  return out;
}

Vec guard_clause(const Vec& ps, std::size_t i) {
  Vec out;
  out.reserve(ps.size() - i);
  out.push_back(ps[i].args[0]);
  out.insert(out.end(), ps.begin() + static_cast<std::ptrdiff_t>(i) + 1, ps.end());
  return out;
}

Vec con_clause(const Vec& ps, std::size_t i) {
  Vec out = ps[i].args;
  out.insert(out.end(), ps.begin() + static_cast<std::ptrdiff_t>(i) + 1, ps.end());
  return out;
}

Vec rest_clause(const Vec& ps, std::size_t i) { return Vec(ps.begin() + static_cast<std::ptrdiff_t>(i) + 1, ps.end()); }

void append(Set& to, Set&& from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

enum class Mode { Covered, Uncovered, Divergent };

Set step(AlgorithmContext& ctx, Mode mode, const Vec& ps, const ValueAbstraction& va);

Set step(AlgorithmContext& ctx, Mode mode, Vec&& ps, ValueAbstraction&& va) {
  return step(ctx, mode, static_cast<const Vec&>(ps), static_cast<const ValueAbstraction&>(va));
}

Set step(AlgorithmContext& ctx, Mode mode, const Vec& ps, const ValueAbstraction& va) {
  if (ps.empty()) {
    if (!va.patterns.empty()) invariant("clause shorter than value vector");
    if (mode == Mode::Covered) return {va};
    return {};
  }
  const CorePattern& p = ps.front();

  if (p.is_guard()) {
    Set r = step(ctx, mode, guard_clause(ps, 0), push_guard(ctx, va, p));
    drop_head(r);
    return r;
  }

  if (va.patterns.empty()) invariant("value vector shorter than clause");
  const CorePattern& u = va.patterns.front();

  if (p.is_var()) {
    Set r = step(ctx, mode, rest_clause(ps, 0), bind_var(va, p.id));
    ucon(r, u);
    return r;
  }

  // Constructor pattern.
  if (u.is_con()) {
    if (u.con != p.con) {
      if (mode == Mode::Uncovered) return {va};
      return {};
    }
    Set r = step(ctx, mode, con_clause(ps, 0), flatten_head(va));
    kcon(r, u);
    return r;
  }

  // Constructor pattern against a variable value.
  switch (mode) {
    case Mode::Covered:
      return step(ctx, mode, ps, instantiate(ctx, va, *p.con));
    case Mode::Uncovered: {
      const DataDecl* decl = ctx.program.find_data(p.con->type_name);
      if (!decl) invariant("constructor without type " + p.con->name);
      Set out;
      for (const auto& k : decl->constructors) append(out, step(ctx, mode, ps, instantiate(ctx, va, k)));
      return out;
    }
    case Mode::Divergent: {
      ValueAbstraction bottom = va;
      bottom.constraints.push_back(Constraint::bottom(u.id));
      Set out{std::move(bottom)};
      append(out, step(ctx, mode, ps, instantiate(ctx, va, *p.con)));
      return out;
    }
  }
  return {};
}

Set run(AlgorithmContext& ctx, Mode mode, const Vec& clause, const ValueAbstraction& va) {
  Set r = step(ctx, mode, clause, va);
  ctx.charge(r.size());
  return r;
}

}  // namespace

ValueAbstraction initial_abstraction(AlgorithmContext& ctx, const std::vector<TypeExpr>& arg_types) {
  ValueAbstraction va;
  for (const auto& t : arg_types) {
    VarId x = ctx.names.fresh();
    va.env.bind(x, t);
    va.patterns.push_back(CorePattern::var(x));
    for (auto& c : range_postulates(ctx.program, t, x)) va.constraints.push_back(std::move(c));
  }
  return va;
}

std::vector<ValueAbstraction> covered(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                      const ValueAbstraction& va) {
  return run(ctx, Mode::Covered, clause, va);
}

std::vector<ValueAbstraction> uncovered(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                        const ValueAbstraction& va) {
  return run(ctx, Mode::Uncovered, clause, va);
}

std::vector<ValueAbstraction> divergent(AlgorithmContext& ctx, const std::vector<CorePattern>& clause,
                                        const ValueAbstraction& va) {
  return run(ctx, Mode::Divergent, clause, va);
}

namespace {

class Filter {
 public:
  Filter(Oracle& oracle, FunctionAnalysis& out) : oracle_(oracle), out_(out) {}

  bool keep(const ValueAbstraction& va) {
    SolverVerdict v = oracle_.check(va);
    if (v.kind == SolverVerdict::Kind::Unknown) ++out_.unknown_verdicts;
    return v.satisfiable();
  }

 private:
  Oracle& oracle_;
  FunctionAnalysis& out_;
};

}  // namespace

FunctionAnalysis analyze_function(const Program& program, const DesugaredFunction& fn, NameSupply& names,
                                  Oracle& oracle, const AnalysisOptions& options) {
  FunctionAnalysis out;
  out.name = fn.name;
  out.function = fn;
  AlgorithmContext ctx{program, names, options.cap, 0};
  std::size_t failures_before = oracle.backend_failures();
  Filter filter(oracle, out);

  try {
    out.initial.push_back(initial_abstraction(ctx, fn.arg_types));
    const Set* prev = &out.initial;
    for (const auto& clause : fn.clauses) {
      ClauseAnalysis ca;
      ca.source_index = clause.source_index;
      std::unordered_set<std::string> seen_c, seen_u, seen_d;
      for (std::size_t j = 0; j < prev->size(); ++j) {
        const ValueAbstraction& v = (*prev)[j];
        for (auto& w : covered(ctx, clause.patterns, v)) {
          if (filter.keep(w) && seen_c.insert(canonical_key(w)).second) ca.covered.push_back(std::move(w));
        }
        for (auto& w : uncovered(ctx, clause.patterns, v)) {
          if (filter.keep(w) && seen_u.insert(canonical_key(w)).second) ca.uncovered.push_back(std::move(w));
        }
        for (auto& w : divergent(ctx, clause.patterns, v)) {
          if (filter.keep(w) && seen_d.insert(canonical_key(w)).second) ca.divergent.push_back({std::move(w), j});
        }
      }
      out.clauses.push_back(std::move(ca));
      prev = &out.clauses.back().uncovered;
    }
    out.missing = *prev;
    for (const auto& m : out.missing) out.missing_verdicts.push_back(oracle.check(m));
  } catch (const AnalysisCapExceeded&) {
    out.incomplete = true;
  }
  out.produced = ctx.produced;
  out.degraded = oracle.backend_failures() > failures_before;
  return out;
}

namespace {

void measure(const Program& program, const CorePattern& p, std::size_t& nodes, std::size_t& c) {
  ++nodes;
  if (p.is_guard()) {
    c = std::max<std::size_t>(c, 2);
    measure(program, p.args[0], nodes, c);
    return;
  }
  if (p.is_con()) {
    if (const DataDecl* d = program.find_data(p.con->type_name)) c = std::max(c, d->constructors.size());
    for (const auto& a : p.args) measure(program, a, nodes, c);
  }
}

}  // namespace

double complexity_bound(const Program& program, const DesugaredFunction& fn) {
  std::size_t m = 1, c = 1;
  for (const auto& clause : fn.clauses) {
    std::size_t nodes = 0;
    for (const auto& p : clause.patterns) measure(program, p, nodes, c);
    m = std::max(m, nodes);
  }
  double n = static_cast<double>(std::max<std::size_t>(fn.clauses.size(), 1));
  return n * static_cast<double>(m) * std::pow(static_cast<double>(c), static_cast<double>(m));
}

}  // namespace patcheck

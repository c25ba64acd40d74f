#include "patcheck/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace patcheck {

SolverVerdict SolverVerdict::unsat(std::string why) {
  SolverVerdict v;
  v.kind = Kind::Unsat;
  v.reason = std::move(why);
  return v;
}

SolverVerdict SolverVerdict::sat(std::optional<std::vector<ModelEntry>> model) {
  SolverVerdict v;
  v.kind = Kind::Sat;
  v.model = std::move(model);
  return v;
}

SolverVerdict SolverVerdict::unknown(std::string why) {
  SolverVerdict v;
  v.kind = Kind::Unknown;
  v.reason = std::move(why);
  return v;
}

std::string_view to_string(OracleBackend b) {
  switch (b) {
    case OracleBackend::Trivial: return "trivial";
    case OracleBackend::Builtin: return "builtin";
    case OracleBackend::External: return "external";
  }
  return "?";
}

// ---- saturation --------------------------------------------------------------

namespace {

class UnionFind {
 public:
  VarId find(VarId v) {
    auto it = parent_.find(v);
    if (it == parent_.end() || it->second == v) return v;
    VarId root = find(it->second);
    parent_[v] = root;
    return root;
  }

  void unite(VarId a, VarId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[a] = a;
    parent_[b] = a;  // lowest id represents the class
  }

  bool empty() const { return parent_.empty(); }
  std::map<VarId, VarId> mapping() {
    std::map<VarId, VarId> out;
    std::vector<VarId> keys;
    for (const auto& [k, _] : parent_) keys.push_back(k);
    for (VarId k : keys) {
      VarId r = find(k);
      if (r != k) out[k] = r;
    }
    return out;
  }

 private:
  std::map<VarId, VarId> parent_;
};

bool is_var_alias(const Constraint& c) {
  return c.kind == Constraint::Kind::VarEq ||
         (c.kind == Constraint::Kind::TermEq && c.expr->kind == Expr::Kind::Var && c.expr->var != 0);
}

VarId alias_target(const Constraint& c) { return c.kind == Constraint::Kind::VarEq ? c.other : c.expr->var; }

Constraint rename_constraint(const Constraint& c, const std::map<VarId, VarId>& m) {
  auto r = [&](VarId v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  Constraint out = c;
  out.var = r(c.var);
  out.other = r(c.other);
  for (auto& a : out.args) a = r(a);
  out.expr = rename_vars(c.expr, m);
  return out;
}

}  // namespace

namespace {

std::vector<Constraint> saturate(std::vector<Constraint> delta, UnionFind& global) {
  for (;;) {
    UnionFind uf;
    std::vector<Constraint> rest;
    for (auto& c : delta) {
      if (is_var_alias(c)) {
        uf.unite(c.var, alias_target(c));
        global.unite(c.var, alias_target(c));
      } else {
        rest.push_back(std::move(c));
      }
    }
    auto m = uf.mapping();
    std::vector<Constraint> out;
    out.reserve(rest.size());
    for (const auto& c : rest) {
      Constraint rc = rename_constraint(c, m);
      if (std::find(out.begin(), out.end(), rc) == out.end()) out.push_back(std::move(rc));
    }

    // Congruence: v = K a⃗ and v = K b⃗ imply a⃗ = b⃗.
    std::vector<Constraint> extra;
    std::map<VarId, const Constraint*> first_con;
    for (const auto& c : out) {
      if (c.kind != Constraint::Kind::ConEq) continue;
      auto [it, inserted] = first_con.emplace(c.var, &c);
      if (inserted || it->second->con != c.con) continue;
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (c.args[i] != it->second->args[i]) extra.push_back(Constraint::var_eq(it->second->args[i], c.args[i]));
      }
    }
    if (extra.empty()) return out;
    delta = std::move(out);
    delta.insert(delta.end(), extra.begin(), extra.end());
  }
}

}  // namespace

std::vector<Constraint> saturate_var_equalities(std::vector<Constraint> delta) {
  UnionFind global;
  return saturate(std::move(delta), global);
}

std::map<VarId, VarId> variable_representatives(const std::vector<Constraint>& delta) {
  UnionFind global;
  saturate(delta, global);
  return global.mapping();
}

bool types_consistent(const std::vector<Constraint>& delta) {
  return std::all_of(delta.begin(), delta.end(), [](const Constraint& c) {
    return c.kind != Constraint::Kind::TypeEq || c.lhs_type == c.rhs_type;
  });
}

// ---- bottom assertions -------------------------------------------------------

namespace {

/// Whether evaluating `e` could diverge given that `defined` variables are
/// known to be evaluated.
bool may_diverge(const Expr& e, const std::set<VarId>& defined, const KnownBool& known) {
  if (e.kind == Expr::Kind::App) return true;
  if (e.kind == Expr::Kind::Var && e.var && !defined.count(e.var)) return true;
  if (e.kind == Expr::Kind::Binary && (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or)) {
    auto l = known_value(e.args[0], known);
    if (l && *l != (e.binary_op == BinaryOp::And)) return may_diverge(e.args[0], defined, known);
  }
  return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return may_diverge(a, defined, known); });
}

}  // namespace

BottomCheck bottom_conflict(const std::vector<Constraint>& delta) {
  BottomCheck out;
  std::set<VarId> bottoms;
  for (const auto& c : delta) {
    if (c.kind == Constraint::Kind::Bottom) bottoms.insert(c.var);
  }
  if (bottoms.empty()) {
    out.remaining = delta;
    return out;
  }

  // Variables known to hold a constructor, and everything a known guard
  // result forced along the way.
  std::set<VarId> defined;
  for (const auto& c : delta) {
    if (c.kind == Constraint::Kind::ConEq) defined.insert(c.var);
  }
  std::map<VarId, bool> known = known_booleans(delta, [](VarId v) { return v; });
  for (const auto& [v, _] : known) defined.insert(v);
  KnownBool lookup = [&](VarId v) -> std::optional<bool> {
    auto it = known.find(v);
    if (it == known.end()) return std::nullopt;
    return it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : delta) {
      if (c.kind != Constraint::Kind::TermEq || !defined.count(c.var)) continue;
      std::set<VarId> forced;
      strict_variables(*c.expr, lookup, forced);
      for (VarId v : forced) changed |= defined.insert(v).second;
    }
  }

  for (VarId b : bottoms) {
    if (defined.count(b)) {
      out.unsat = true;
      return out;
    }
  }
  for (const auto& c : delta) {
    if (c.kind == Constraint::Kind::TermEq && bottoms.count(c.var) && !may_diverge(*c.expr, defined, lookup)) {
      out.unsat = true;
      return out;
    }
  }
  for (const auto& c : delta) {
    if (c.kind == Constraint::Kind::Bottom) continue;
    if (c.kind == Constraint::Kind::TermEq && bottoms.count(c.var)) continue;
    out.remaining.push_back(c);
  }
  return out;
}

// ---- canonical keys ----------------------------------------------------------

namespace {

struct CanonicalForm {
  std::string key;
  std::vector<VarId> order;  // variables by first occurrence
};

void expr_key(const Expr& e, std::map<VarId, std::size_t>& index, std::vector<VarId>& order, std::string& out) {
  auto name = [&](VarId v) {
    auto [it, inserted] = index.emplace(v, index.size());
    if (inserted) order.push_back(v);
    return "%" + std::to_string(it->second);
  };
  switch (e.kind) {
    case Expr::Kind::Var:
      out += e.var ? name(e.var) : e.name;
      return;
    case Expr::Kind::Int:
      out += e.int_value.str();
      return;
    case Expr::Kind::Bool:
      out += e.bool_value ? "T" : "F";
      return;
    case Expr::Kind::Unary:
      out += e.unary_op == UnaryOp::Not ? "(!" : "(~";
      break;
    case Expr::Kind::Binary:
      out += "(" + std::string(to_string(e.binary_op));
      break;
    case Expr::Kind::App:
      out += "(@" + e.name;
      break;
  }
  for (const auto& a : e.args) {
    out += ' ';
    expr_key(a, index, order, out);
  }
  out += ')';
}

CanonicalForm canonical_form(const std::vector<Constraint>& delta, const TypingEnv& env) {
  CanonicalForm f;
  std::map<VarId, std::size_t> index;
  auto name = [&](VarId v) {
    auto [it, inserted] = index.emplace(v, index.size());
    if (inserted) f.order.push_back(v);
    return "%" + std::to_string(it->second);
  };
  for (const auto& c : delta) {
    switch (c.kind) {
      case Constraint::Kind::TermEq:
        f.key += name(c.var) + "=";
        expr_key(*c.expr, index, f.order, f.key);
        break;
      case Constraint::Kind::VarEq:
        f.key += name(c.var);
        f.key += "==" + name(c.other);
        break;
      case Constraint::Kind::Bottom:
        f.key += name(c.var) + "=_|_";
        break;
      case Constraint::Kind::TypeEq:
        f.key += c.lhs_type.to_string() + "~" + c.rhs_type.to_string();
        break;
      case Constraint::Kind::ConEq:
        f.key += name(c.var) + "=" + c.con->type_name + "." + c.con->name;
        for (VarId a : c.args) f.key += " " + name(a);
        break;
      case Constraint::Kind::Holds:
        f.key += "holds ";
        expr_key(*c.expr, index, f.order, f.key);
        break;
    }
    f.key += ';';
  }
  f.key += "|";
  for (VarId v : f.order) {
    const TypeExpr* t = env.lookup(v);
    f.key += (t ? t->to_string() : std::string("?")) + ",";
  }
  return f;
}

}  // namespace

std::string canonical_constraint_key(const std::vector<Constraint>& delta, const TypingEnv& env) {
  return canonical_form(delta, env).key;
}

// ---- oracle ------------------------------------------------------------------

Oracle::Oracle(OracleConfig config) : config_(std::move(config)) {}

namespace {

/// Re-express a cached model in terms of the variables of an alpha-equivalent
/// query.
SolverVerdict remap(const SolverVerdict& v, const std::vector<VarId>& from, const std::vector<VarId>& to) {
  if (!v.model || from == to) return v;
  std::map<VarId, VarId> m;
  for (std::size_t i = 0; i < from.size() && i < to.size(); ++i) m[from[i]] = to[i];
  SolverVerdict out = v;
  for (auto& e : *out.model) {
    if (e.var) {
      auto it = m.find(e.var);
      if (it != m.end()) e.var = it->second;
      e.key = "v" + std::to_string(e.var);
    }
    if (e.atom) {
      e.atom = rename_vars(e.atom, m);
      e.key = (e.is_bool ? "#b:" : "#i:") + debug_string(*e.atom);
    }
  }
  return out;
}

}  // namespace

SolverVerdict Oracle::check_sat(const std::vector<Constraint>& delta, const TypingEnv& env) {
  ++queries_;
  if (config_.backend == OracleBackend::Trivial) return SolverVerdict::sat();

  CanonicalForm form = canonical_form(delta, env);
  auto it = cache_.find(form.key);
  if (it != cache_.end()) {
    ++cache_hits_;
    return remap(it->second, cache_order_.at(form.key), form.order);
  }
  SolverVerdict v = run_pipeline(delta, env);
  cache_.emplace(form.key, v);
  cache_order_.emplace(form.key, form.order);
  return v;
}

SolverVerdict Oracle::run_pipeline(const std::vector<Constraint>& delta, const TypingEnv& env) {
  auto saturated = saturate_var_equalities(delta);
  if (!types_consistent(saturated)) return SolverVerdict::unsat("type equality mismatch");
  auto bottoms = bottom_conflict(saturated);
  if (bottoms.unsat) return SolverVerdict::unsat("divergent variable is evaluated");
  auto translation = translate(bottoms.remaining, env);
  if (!translation) return SolverVerdict::unsat("constructor clash");

  if (config_.backend == OracleBackend::Builtin) return builtin_solve(*translation, config_.limits);

  if (translation->conjuncts.empty()) return SolverVerdict::sat(std::vector<ModelEntry>{});
  if (config_.timeout.count() <= 0) {
    ++backend_failures_;
    return SolverVerdict::unknown("solver timeout");
  }
  ProcessResult r = run_solver_process(config_.command, emit_smtlib(*translation), config_.timeout);
  SolverVerdict v = parse_solver_output(r);
  if (v.kind == SolverVerdict::Kind::Unknown) ++backend_failures_;
  return v;
}

}  // namespace patcheck

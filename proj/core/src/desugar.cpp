#include "patcheck/desugar.hpp"

#include <stdexcept>

namespace patcheck {

void ResugarMap::merge(const ResugarMap& other) {
  names.insert(other.names.begin(), other.names.end());
  literals.insert(other.literals.begin(), other.literals.end());
  origins.insert(other.origins.begin(), other.origins.end());
}

namespace {

class ClauseLowering {
 public:
  ClauseLowering(const Program& program, NameSupply& fresh, ResugarMap& names, std::string origin)
      : program_(program), fresh_(fresh), names_(names), origin_(std::move(origin)) {}

  /// Appends the lowering of `p` to `out`. Literals contribute two elements.
  void lower(const SurfacePattern& p, std::vector<CorePattern>& out) {
    using K = SurfacePattern::Kind;
    switch (p.kind) {
      case K::Variable: {
        VarId id = fresh_var();
        names_.names[id] = p.name;
        scope_[p.name] = id;
        out.push_back(CorePattern::var(id));
        return;
      }
      case K::Wildcard:
        out.push_back(CorePattern::var(fresh_var()));
        return;
      case K::IntLiteral: {
        VarId id = fresh_var();
        names_.literals[id] = p.int_value;
        out.push_back(CorePattern::var(id));
        auto test = std::make_shared<const Expr>(
            Expr::binary(BinaryOp::Eq, Expr::variable("", id), Expr::integer(p.int_value)));
        out.push_back(CorePattern::guard(true_pattern(), test));
        return;
      }
      case K::BoolLiteral:
        out.push_back(CorePattern::constructor(constructor(p.bool_value ? "True" : "False"), {}));
        return;
      case K::ConApp:
        out.push_back(CorePattern::constructor(constructor(p.name), lower_all(p.args)));
        return;
      case K::Tuple:
        out.push_back(CorePattern::constructor(constructor(tuple_type_name(p.args.size())), lower_all(p.args)));
        return;
      case K::List: {
        CorePattern tail = CorePattern::constructor(constructor("[]"), {});
        std::vector<std::vector<CorePattern>> heads;
        for (const auto& e : p.args) heads.push_back(lower_one(e));
        for (auto it = heads.rbegin(); it != heads.rend(); ++it) {
          std::vector<CorePattern> args = std::move(*it);
          args.push_back(std::move(tail));
          tail = CorePattern::constructor(constructor(":"), std::move(args));
        }
        out.push_back(std::move(tail));
        return;
      }
      case K::Cons: {
        std::vector<CorePattern> args = lower_one(p.args[0]);
        auto tail = lower_one(p.args[1]);
        args.insert(args.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
        out.push_back(CorePattern::constructor(constructor(":"), std::move(args)));
        return;
      }
    }
  }

  CorePattern lower_guard(const Expr& guard) {
    return CorePattern::guard(true_pattern(), std::make_shared<const Expr>(bind(guard)));
  }

 private:
  VarId fresh_var() {
    VarId id = fresh_.fresh();
    names_.origins[id] = origin_;
    return id;
  }

  std::vector<CorePattern> lower_one(const SurfacePattern& p) {
    std::vector<CorePattern> out;
    lower(p, out);
    return out;
  }

  std::vector<CorePattern> lower_all(const std::vector<SurfacePattern>& ps) {
    std::vector<CorePattern> out;
    for (const auto& p : ps) lower(p, out);
    return out;
  }

  const ConstructorSig* constructor(std::string_view name) const {
    const ConstructorSig* k = program_.find_constructor(name);
    if (!k) throw std::logic_error("desugar: unknown constructor " + std::string(name));
    return k;
  }

  CorePattern true_pattern() const { return CorePattern::constructor(constructor("True"), {}); }

  Expr bind(const Expr& e) const {
    if (e.kind == Expr::Kind::Var) {
      if (e.name == "otherwise") return Expr::boolean(true);
      auto it = scope_.find(e.name);
      if (it == scope_.end()) throw std::logic_error("desugar: unbound guard variable " + e.name);
      Expr out = Expr::variable(e.name, it->second);
      out.span = e.span;
      return out;
    }
    Expr out = e;
    for (auto& a : out.args) a = bind(a);
    return out;
  }

  const Program& program_;
  NameSupply& fresh_;
  ResugarMap& names_;
  std::string origin_;
  std::map<std::string, VarId> scope_;
};

}  // namespace

std::vector<CorePattern> desugar_clause(const Program& program, const Clause& clause, NameSupply& fresh,
                                        ResugarMap& names) {
  ClauseLowering lowering(program, fresh, names, "clause");
  std::vector<CorePattern> out;
  for (const auto& p : clause.patterns) lowering.lower(p, out);
  if (clause.guard) out.push_back(lowering.lower_guard(*clause.guard));
  return out;
}

DesugaredFunction desugar_function(const Program& program, const FunctionDef& fn, NameSupply& fresh,
                                   ResugarMap& names) {
  const Signature* sig = program.find_signature(fn.name);
  if (!sig) throw std::logic_error("desugar: function without signature " + fn.name);
  DesugaredFunction out;
  out.name = fn.name;
  out.arg_types = sig->arg_types;
  out.result_type = sig->result_type;
  out.span = fn.span;
  for (std::size_t i = 0; i < fn.clauses.size(); ++i) {
    const Clause& c = fn.clauses[i];
    ClauseLowering lowering(program, fresh, names, fn.name + " clause " + std::to_string(i + 1));
    DesugaredClause dc;
    for (const auto& p : c.patterns) lowering.lower(p, dc.patterns);
    if (c.guard) dc.patterns.push_back(lowering.lower_guard(*c.guard));
    dc.source_index = i + 1;
    dc.span = c.span;
    // Guard alternatives share one head; point at the alternative itself.
    if (c.guard && c.guard->span.line != 0 && c.guard->span.line != c.span.line) {
      dc.span = c.rhs_span.line ? SourceSpan::merge(c.guard->span, c.rhs_span) : c.guard->span;
    }
    dc.rendered = render_clause_head(fn, c);
    out.clauses.push_back(std::move(dc));
  }
  return out;
}

std::vector<Constraint> range_postulates(const Program& program, const TypeExpr& type, VarId v) {
  if (type.kind != TypeExpr::Kind::Con) return {};
  const DataDecl* d = program.find_data(type.name);
  if (!d || !d->range) return {};
  auto lo = std::make_shared<const Expr>(
      Expr::binary(BinaryOp::Ge, Expr::variable("", v), Expr::integer(d->range->first)));
  auto hi = std::make_shared<const Expr>(
      Expr::binary(BinaryOp::Le, Expr::variable("", v), Expr::integer(d->range->second)));
  return {Constraint::holds(lo), Constraint::holds(hi)};
}

namespace {

bool is_list_spine_closed(const CorePattern& p) {
  const CorePattern* cur = &p;
  while (cur->is_con() && cur->con->sugar == ConstructorSig::Sugar::Cons) cur = &cur->args[1];
  return cur->is_con() && cur->con->sugar == ConstructorSig::Sugar::Nil;
}

}  // namespace

std::string resugar(const CorePattern& p, const std::function<std::string(VarId)>& name, bool atomic) {
  switch (p.kind) {
    case CorePattern::Kind::Var:
      return name(p.id);
    case CorePattern::Kind::Guard:
      return resugar(p.args[0], name, atomic);
    case CorePattern::Kind::Con:
      break;
  }
  const ConstructorSig& k = *p.con;
  switch (k.sugar) {
    case ConstructorSig::Sugar::Nil:
      return "[]";
    case ConstructorSig::Sugar::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) s += ", ";
        s += resugar(p.args[i], name, false);
      }
      return s + ")";
    }
    case ConstructorSig::Sugar::Cons: {
      if (is_list_spine_closed(p)) {
        std::string s = "[";
        const CorePattern* cur = &p;
        bool first = true;
        while (cur->con->sugar == ConstructorSig::Sugar::Cons) {
          if (!first) s += ", ";
          first = false;
          s += resugar(cur->args[0], name, false);
          cur = &cur->args[1];
        }
        return s + "]";
      }
      const CorePattern& head = p.args[0];
      bool wrap = head.is_con() && head.con->sugar == ConstructorSig::Sugar::Cons && !is_list_spine_closed(head);
      std::string h = resugar(head, name, false);
      if (wrap) h = "(" + h + ")";
      std::string s = h + ":" + resugar(p.args[1], name, false);
      return atomic ? "(" + s + ")" : s;
    }
    case ConstructorSig::Sugar::None:
      break;
  }
  std::string s = k.name;
  for (const auto& a : p.args) s += " " + resugar(a, name, true);
  return atomic && !p.args.empty() ? "(" + s + ")" : s;
}

std::string resugar(const CorePattern& p, const ResugarMap& m, bool atomic) {
  return resugar(
      p,
      [&m](VarId v) -> std::string {
        if (auto it = m.literals.find(v); it != m.literals.end()) return it->second.str();
        if (auto it = m.names.find(v); it != m.names.end()) return it->second;
        return "~" + std::to_string(v);
      },
      atomic);
}

}  // namespace patcheck

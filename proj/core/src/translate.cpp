#include <map>
#include <set>

#include "patcheck/oracle.hpp"

namespace patcheck {

LinearTerm& LinearTerm::operator+=(const LinearTerm& o) {
  for (const auto& [k, c] : o.coeffs) {
    Integer& slot = coeffs[k];
    slot += c;
    if (slot == 0) coeffs.erase(k);
  }
  constant += o.constant;
  return *this;
}

LinearTerm& LinearTerm::operator*=(const Integer& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [_, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "/=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

Formula Formula::constant(bool v) {
  Formula f;
  f.kind = v ? Kind::True : Kind::False;
  return f;
}

Formula Formula::var(std::string key) {
  Formula f;
  f.kind = Kind::BoolVar;
  f.key = std::move(key);
  return f;
}

Formula Formula::negation(Formula g) {
  switch (g.kind) {
    case Kind::True: return constant(false);
    case Kind::False: return constant(true);
    case Kind::Not: return std::move(g.args[0]);
    case Kind::Cmp:
      g.op = patcheck::negate(g.op);
      return g;
    default: break;
  }
  Formula f;
  f.kind = Kind::Not;
  f.args.push_back(std::move(g));
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::And;
  for (auto& g : fs) {
    if (g.kind == Kind::False) return constant(false);
    if (g.kind == Kind::True) continue;
    f.args.push_back(std::move(g));
  }
  if (f.args.empty()) return constant(true);
  if (f.args.size() == 1) return std::move(f.args[0]);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::Or;
  for (auto& g : fs) {
    if (g.kind == Kind::True) return constant(true);
    if (g.kind == Kind::False) continue;
    f.args.push_back(std::move(g));
  }
  if (f.args.empty()) return constant(false);
  if (f.args.size() == 1) return std::move(f.args[0]);
  return f;
}

Formula Formula::iff(Formula a, Formula b) {
  if (a.kind == Kind::True) return b;
  if (b.kind == Kind::True) return a;
  if (a.kind == Kind::False) return negation(std::move(b));
  if (b.kind == Kind::False) return negation(std::move(a));
  Formula f;
  f.kind = Kind::Iff;
  f.args.push_back(std::move(a));
  f.args.push_back(std::move(b));
  return f;
}

Formula Formula::compare(CmpOp op, LinearTerm l, LinearTerm r) {
  if (l.is_constant() && r.is_constant()) {
    const Integer &a = l.constant, &b = r.constant;
    switch (op) {
      case CmpOp::Eq: return constant(a == b);
      case CmpOp::Ne: return constant(a != b);
      case CmpOp::Lt: return constant(a < b);
      case CmpOp::Le: return constant(a <= b);
      case CmpOp::Gt: return constant(a > b);
      case CmpOp::Ge: return constant(a >= b);
    }
  }
  Formula f;
  f.kind = Kind::Cmp;
  f.op = op;
  f.lhs = std::move(l);
  f.rhs = std::move(r);
  return f;
}

namespace {

std::string term_string(const LinearTerm& t) {
  std::string s;
  for (const auto& [k, c] : t.coeffs) {
    if (!s.empty()) s += " + ";
    s += c == 1 ? k : c.str() + "*" + k;
  }
  if (s.empty()) return t.constant.str();
  if (t.constant != 0) s += " + " + t.constant.str();
  return s;
}

}  // namespace

std::string Formula::to_string() const {
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += op;
      s += args[i].to_string();
    }
    return s + ")";
  };
  switch (kind) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::BoolVar: return key;
    case Kind::Not: return "!" + args[0].to_string();
    case Kind::And: return join(" & ");
    case Kind::Or: return join(" | ");
    case Kind::Iff: return join(" <-> ");
    case Kind::Cmp: return term_string(lhs) + " " + std::string(patcheck::to_string(op)) + " " + term_string(rhs);
  }
  return "?";
}

// ---- constraint translation --------------------------------------------------

namespace {

enum class Sort { Bool, Int, Unknown };

bool is_numeric_type(const TypeExpr& t) { return t.kind == TypeExpr::Kind::Con && (t.name == "Int" || t.name == "Word8"); }

class Translator {
 public:
  Translator(const TypingEnv& env, Translation& out) : env_(env), out_(out) {}

  Sort var_sort(VarId v) const {
    const TypeExpr* t = env_.lookup(v);
    if (!t) return Sort::Unknown;
    if (t->is_con("Bool")) return Sort::Bool;
    if (is_numeric_type(*t)) return Sort::Int;
    return Sort::Unknown;
  }

  Sort sort_of(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Var: return e.var ? var_sort(e.var) : Sort::Unknown;
      case Expr::Kind::Int: return Sort::Int;
      case Expr::Kind::Bool: return Sort::Bool;
      case Expr::Kind::Unary: return e.unary_op == UnaryOp::Not ? Sort::Bool : Sort::Int;
      case Expr::Kind::Binary:
        switch (e.binary_op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul: return Sort::Int;
          default: return Sort::Bool;
        }
      case Expr::Kind::App: return Sort::Unknown;
    }
    return Sort::Unknown;
  }

  std::string var_symbol(VarId v, bool is_bool) {
    std::string key = "v" + std::to_string(v);
    if (declared_.emplace(key).second) out_.symbols.push_back({key, is_bool, v, nullptr});
    return key;
  }

  std::string opaque_symbol(const Expr& e, bool is_bool) {
    std::string key = (is_bool ? "#b:" : "#i:") + debug_string(e);
    if (declared_.emplace(key).second) out_.symbols.push_back({key, is_bool, 0, std::make_shared<const Expr>(e)});
    return key;
  }

  Formula to_bool(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        if (e.var && var_sort(e.var) == Sort::Bool) return Formula::var(var_symbol(e.var, true));
        return Formula::var(opaque_symbol(e, true));
      case Expr::Kind::Bool: return Formula::constant(e.bool_value);
      case Expr::Kind::Unary:
        if (e.unary_op == UnaryOp::Not) return Formula::negation(to_bool(e.args[0]));
        return Formula::var(opaque_symbol(e, true));
      case Expr::Kind::Binary: return binary_to_bool(e);
      default: return Formula::var(opaque_symbol(e, true));
    }
  }

  LinearTerm to_int(const Expr& e) {
    LinearTerm t;
    switch (e.kind) {
      case Expr::Kind::Int:
        t.constant = e.int_value;
        return t;
      case Expr::Kind::Var:
        if (e.var && var_sort(e.var) == Sort::Int) {
          t.coeffs[var_symbol(e.var, false)] = 1;
          return t;
        }
        break;
      case Expr::Kind::Unary:
        if (e.unary_op == UnaryOp::Negate) {
          t = to_int(e.args[0]);
          t *= Integer(-1);
          return t;
        }
        break;
      case Expr::Kind::Binary:
        if (e.binary_op == BinaryOp::Add || e.binary_op == BinaryOp::Sub) {
          t = to_int(e.args[0]);
          LinearTerm r = to_int(e.args[1]);
          if (e.binary_op == BinaryOp::Sub) r *= Integer(-1);
          t += r;
          return t;
        }
        if (e.binary_op == BinaryOp::Mul) {
          LinearTerm l = to_int(e.args[0]);
          LinearTerm r = to_int(e.args[1]);
          if (l.is_constant()) {
            r *= l.constant;
            return r;
          }
          if (r.is_constant()) {
            l *= r.constant;
            return l;
          }
          ++out_.opaque_nonlinear;
        }
        break;
      default:
        break;
    }
    t.coeffs[opaque_symbol(e, false)] = 1;
    return t;
  }

 private:
  Formula binary_to_bool(const Expr& e) {
    const Expr& l = e.args[0];
    const Expr& r = e.args[1];
    switch (e.binary_op) {
      case BinaryOp::And: return Formula::conj({to_bool(l), to_bool(r)});
      case BinaryOp::Or: return Formula::disj({to_bool(l), to_bool(r)});
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        Sort s = sort_of(l);
        if (s == Sort::Unknown) s = sort_of(r);
        Formula f;
        if (s == Sort::Int) {
          f = Formula::compare(CmpOp::Eq, to_int(l), to_int(r));
        } else if (s == Sort::Bool) {
          f = Formula::iff(to_bool(l), to_bool(r));
        } else {
          return Formula::var(opaque_symbol(e, true));
        }
        return e.binary_op == BinaryOp::Eq ? f : Formula::negation(std::move(f));
      }
      case BinaryOp::Lt: return Formula::compare(CmpOp::Lt, to_int(l), to_int(r));
      case BinaryOp::Le: return Formula::compare(CmpOp::Le, to_int(l), to_int(r));
      case BinaryOp::Gt: return Formula::compare(CmpOp::Gt, to_int(l), to_int(r));
      case BinaryOp::Ge: return Formula::compare(CmpOp::Ge, to_int(l), to_int(r));
      default: return Formula::var(opaque_symbol(e, true));
    }
  }

  const TypingEnv& env_;
  Translation& out_;
  std::set<std::string> declared_;
};

}  // namespace

std::optional<Translation> translate(const std::vector<Constraint>& delta, const TypingEnv& env) {
  Translation out;
  Translator tr(env, out);
  std::map<VarId, const ConstructorSig*> heads;
  for (const auto& c : delta) {
    switch (c.kind) {
      case Constraint::Kind::ConEq: {
        auto [it, inserted] = heads.emplace(c.var, c.con);
        if (!inserted && it->second != c.con) return std::nullopt;
        if (c.con->type_name == "Bool") {
          Formula v = Formula::var(tr.var_symbol(c.var, true));
          out.conjuncts.push_back(c.con->name == "True" ? v : Formula::negation(v));
        }
        break;
      }
      case Constraint::Kind::TermEq: {
        Sort s = tr.var_sort(c.var);
        if (s == Sort::Bool) {
          out.conjuncts.push_back(Formula::iff(Formula::var(tr.var_symbol(c.var, true)), tr.to_bool(*c.expr)));
        } else if (s == Sort::Int) {
          LinearTerm v;
          v.coeffs[tr.var_symbol(c.var, false)] = 1;
          out.conjuncts.push_back(Formula::compare(CmpOp::Eq, v, tr.to_int(*c.expr)));
        }
        break;
      }
      case Constraint::Kind::Holds:
        out.conjuncts.push_back(tr.to_bool(*c.expr));
        break;
      default:
        break;
    }
  }
  for (const auto& f : out.conjuncts) {
    if (f.kind == Formula::Kind::False) {
      out.conjuncts = {Formula::constant(false)};
      break;
    }
  }
  std::erase_if(out.conjuncts, [](const Formula& f) { return f.kind == Formula::Kind::True; });
  return out;
}

}  // namespace patcheck

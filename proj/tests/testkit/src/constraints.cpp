#include <algorithm>
#include <random>

#include "patcheck/testkit.hpp"

namespace patcheck::testkit {

namespace {

const Program& builtins() {
  static const Program p;
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }
  bool chance(int percent) { return below(100) < percent; }

 private:
  std::mt19937_64 gen_;
};

struct Builder {
  Rng rng;
  ConstraintCase c;
  std::vector<Value> planted;

  VarId int_var() { return c.vars[static_cast<std::size_t>(rng.below(static_cast<int>(c.int_vars)))]; }
  VarId bool_var() {
    return c.vars[c.int_vars + static_cast<std::size_t>(rng.below(static_cast<int>(c.vars.size() - c.int_vars)))];
  }

  Expr int_expr(int depth) {
    int r = rng.below(depth > 0 ? 6 : 3);
    switch (r) {
      case 0: return Expr::integer(rng.range(-6, 6));
      case 1:
      case 2: return Expr::variable("i", int_var());
      case 3: return Expr::binary(BinaryOp::Add, int_expr(depth - 1), int_expr(depth - 1));
      case 4: return Expr::binary(BinaryOp::Sub, int_expr(depth - 1), int_expr(depth - 1));
      default: return Expr::binary(BinaryOp::Mul, Expr::integer(rng.range(-3, 3)), int_expr(depth - 1));
    }
  }

  Expr bool_expr(int depth) {
    static const BinaryOp cmps[] = {BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge};
    int r = rng.below(depth > 0 ? 8 : 3);
    switch (r) {
      case 0: return Expr::variable("b", bool_var());
      case 1:
      case 2: return Expr::binary(cmps[rng.below(6)], int_expr(1), int_expr(1));
      case 3: return Expr::unary(UnaryOp::Not, bool_expr(depth - 1));
      case 4: return Expr::binary(BinaryOp::And, bool_expr(depth - 1), bool_expr(depth - 1));
      case 5: return Expr::binary(BinaryOp::Or, bool_expr(depth - 1), bool_expr(depth - 1));
      case 6: return Expr::boolean(rng.chance(50));
      default: return Expr::binary(rng.chance(50) ? BinaryOp::Eq : BinaryOp::Ne, bool_expr(depth - 1),
                                   bool_expr(depth - 1));
    }
  }

  Constraint one() {
    const Program& p = builtins();
    int r = rng.below(10);
    // the analysis binds guard results to fresh variables, never to one the
    // expression mentions
    if (r < 4) {
      VarId y = bool_var();
      for (int tries = 0; tries < 20; ++tries) {
        Expr e = bool_expr(2);
        std::vector<VarId> used;
        collect_vars(e, used);
        if (std::find(used.begin(), used.end(), y) == used.end()) return Constraint::term_eq(y, std::make_shared<Expr>(std::move(e)));
      }
      return Constraint::bottom(y);
    }
    if (r < 6) {
      return Constraint::con_eq(bool_var(), p.find_constructor(rng.chance(50) ? "True" : "False"), {});
    }
    if (r < 7) {
      bool ints = rng.chance(50);
      return Constraint::var_eq(ints ? int_var() : bool_var(), ints ? int_var() : bool_var());
    }
    if (r < 8) return Constraint::bottom(rng.chance(50) ? int_var() : bool_var());
    return Constraint::term_eq(bool_var(), std::make_shared<Expr>(Expr::binary(
                                               BinaryOp::Le, int_expr(1), int_expr(1))));
  }

  bool planted_ok(const Constraint& k) {
    ValueAbstraction a;
    for (VarId v : c.vars) a.patterns.push_back(CorePattern::var(v));
    a.constraints = {k};
    return denotes(a, planted);
  }
};

}  // namespace

ConstraintCase random_constraints(std::uint64_t seed) {
  Builder b{Rng(seed), {}, {}};
  const Program& p = builtins();
  b.c.int_vars = static_cast<std::size_t>(b.rng.range(1, 2));
  std::size_t bools = static_cast<std::size_t>(b.rng.range(1, 3));
  VarId next = 1;
  // holds only ever appears as a range postulate
  std::vector<Constraint> postulates;
  for (std::size_t i = 0; i < b.c.int_vars; ++i) {
    TypeExpr t = TypeExpr::con(b.rng.chance(30) ? "Word8" : "Int");
    auto ps = range_postulates(p, t, next);
    postulates.insert(postulates.end(), ps.begin(), ps.end());
    b.c.vars.push_back(next);
    b.c.env.bind(next++, t);
  }
  for (std::size_t i = 0; i < bools; ++i) {
    b.c.vars.push_back(next);
    b.c.env.bind(next++, TypeExpr::con("Bool"));
  }
  for (std::size_t i = 0; i < b.c.vars.size(); ++i) {
    if (b.rng.chance(10)) {
      b.planted.push_back(Value::bottom());
    } else if (i < b.c.int_vars) {
      bool word = b.c.env.lookup(b.c.vars[i])->name == "Word8";
      b.planted.push_back(Value::integer(b.rng.range(word ? 0 : -10, 10)));
    } else {
      b.planted.push_back(Value::constructor(p.find_constructor(b.rng.chance(50) ? "True" : "False")));
    }
  }
  b.c.delta = postulates;
  bool plant = b.rng.chance(70);
  int n = b.rng.range(1, 6);
  for (int i = 0; i < n; ++i) {
    Constraint k = b.one();
    for (int tries = 0; plant && tries < 50 && !b.planted_ok(k); ++tries) k = b.one();
    b.c.delta.push_back(std::move(k));
  }
  // guard results are always matched afterwards: a constructor or bottom
  std::vector<VarId> targets;
  for (const auto& k : b.c.delta)
    if (k.kind == Constraint::Kind::TermEq) targets.push_back(k.var);
  for (VarId y : targets) {
    const Value& want = b.planted[static_cast<std::size_t>(y - 1)];
    bool keep = plant && b.rng.chance(85);
    bool is_bottom = keep ? want.is_bottom() : b.rng.chance(20);
    if (is_bottom) {
      b.c.delta.push_back(Constraint::bottom(y));
    } else {
      bool t = keep ? want.con->name == "True" : b.rng.chance(50);
      b.c.delta.push_back(Constraint::con_eq(y, p.find_constructor(t ? "True" : "False"), {}));
    }
  }
  return b.c;
}

bool brute_force_satisfiable(const ConstraintCase& c, const IntWindow& window) {
  const Program& p = builtins();
  std::vector<std::vector<Value>> domains;
  for (std::size_t i = 0; i < c.vars.size(); ++i) {
    std::vector<Value> d{Value::bottom()};
    if (i < c.int_vars) {
      Integer lo = window.lo;
      if (c.env.lookup(c.vars[i])->name == "Word8" && lo < 0) lo = 0;
      for (Integer n = lo; n <= window.hi; ++n) d.push_back(Value::integer(n));
    } else {
      d.push_back(Value::constructor(p.find_constructor("False")));
      d.push_back(Value::constructor(p.find_constructor("True")));
    }
    domains.push_back(std::move(d));
  }
  ValueAbstraction a;
  for (VarId v : c.vars) a.patterns.push_back(CorePattern::var(v));
  a.constraints = c.delta;
  std::vector<std::size_t> idx(c.vars.size(), 0);
  std::vector<Value> cur;
  for (;;) {
    cur.clear();
    for (std::size_t i = 0; i < idx.size(); ++i) cur.push_back(domains[i][idx[i]]);
    if (denotes(a, cur)) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

std::string to_string(const ConstraintCase& c) {
  std::string s;
  for (const auto& k : c.delta) s += debug_string(k) + "\n";
  return s;
}

}  // namespace patcheck::testkit

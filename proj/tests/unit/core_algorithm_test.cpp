#include <gtest/gtest.h>

#include "patcheck/analysis.hpp"
#include "patcheck/testkit.hpp"

using namespace patcheck;

namespace {

struct Fixture {
  Program program;
  NameSupply names;
  AlgorithmContext ctx;

  explicit Fixture(const std::string& src = "")
      : program(load(src)), names(1), ctx{program, names} {}

  static Program load(const std::string& src) {
    if (src.empty()) return Program();
    auto r = load_program(src, "c.mf");
    EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front().message);
    return std::move(*r.value);
  }

  const ConstructorSig* con(const std::string& n) const { return program.find_constructor(n); }
  CorePattern k(const std::string& n, std::vector<CorePattern> args = {}) const {
    return CorePattern::constructor(con(n), std::move(args));
  }
  ValueAbstraction initial(std::vector<TypeExpr> types) { return initial_abstraction(ctx, types); }
};

bool has_constraint(const ValueAbstraction& a, Constraint::Kind kind, VarId v) {
  for (const auto& c : a.constraints)
    if (c.kind == kind && c.var == v) return true;
  return false;
}

const Constraint* con_eq_on(const ValueAbstraction& a, VarId v) {
  for (const auto& c : a.constraints)
    if (c.kind == Constraint::Kind::ConEq && c.var == v) return &c;
  return nullptr;
}

FunctionAnalysis analyze(const std::string& src, OracleBackend backend = OracleBackend::Builtin) {
  auto r = load_program(src, "c.mf");
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front().message);
  static std::vector<std::unique_ptr<Program>> keep;  // analyses point into the program
  keep.push_back(std::make_unique<Program>(std::move(*r.value)));
  const Program& p = *keep.back();
  NameSupply names = NameSupply::for_function(0);
  ResugarMap m;
  auto fn = desugar_function(p, p.functions[0], names, m);
  OracleConfig cfg;
  cfg.backend = backend;
  Oracle oracle(cfg);
  return analyze_function(p, fn, names, oracle);
}

std::string show(const CorePattern& p) {
  return resugar(p, [](VarId) { return std::string("_"); });
}

}  // namespace

TEST(Initial, OneVariablePerArgument) {
  Fixture f;
  auto a = f.initial({TypeExpr::con("Bool")});
  ASSERT_EQ(a.patterns.size(), 1u);
  EXPECT_TRUE(a.patterns[0].is_var());
  EXPECT_TRUE(a.constraints.empty());
  ASSERT_NE(a.env.lookup(a.patterns[0].id), nullptr);
  EXPECT_TRUE(a.env.lookup(a.patterns[0].id)->is_con("Bool"));
}

TEST(Initial, ConstantFunction) {
  Fixture f;
  auto a = f.initial({});
  EXPECT_TRUE(a.patterns.empty());
  EXPECT_TRUE(a.constraints.empty());
  EXPECT_TRUE(a.env.vars.empty());
}

TEST(Initial, Word8GetsRangeFacts) {
  Fixture f;
  auto a = f.initial({TypeExpr::con("Word8")});
  ASSERT_EQ(a.constraints.size(), 2u);
  EXPECT_EQ(a.constraints[0].kind, Constraint::Kind::Holds);
  EXPECT_EQ(a.constraints[1].kind, Constraint::Kind::Holds);
}

TEST(Uncovered, EmptyVectorLeavesNothingUncovered) {
  Fixture f;
  auto a = f.initial({});
  EXPECT_TRUE(uncovered(f.ctx, {}, a).empty());
}

TEST(Covered, EmptyVectorCoversTheAbstraction) {
  Fixture f;
  auto a = f.initial({});
  auto c = covered(f.ctx, {}, a);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(canonical_key(c[0]), canonical_key(a));
}

TEST(Divergent, EmptyVectorForcesNothing) {
  Fixture f;
  EXPECT_TRUE(divergent(f.ctx, {}, f.initial({})).empty());
}

TEST(Uncovered, NilAgainstListLeavesOnlyCons) {
  Fixture f;
  auto a = f.initial({TypeExpr::list(TypeExpr::var("a"))});
  VarId x = a.patterns[0].id;
  auto u = uncovered(f.ctx, {f.k("[]")}, a);
  ASSERT_EQ(u.size(), 1u);
  ASSERT_TRUE(u[0].patterns[0].is_con());
  EXPECT_EQ(u[0].patterns[0].con->name, ":");
  const Constraint* c = con_eq_on(u[0], x);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->con->name, ":");
  EXPECT_EQ(c->args.size(), 2u);
  bool type_eq = false;
  for (const auto& k : u[0].constraints) type_eq = type_eq || k.kind == Constraint::Kind::TypeEq;
  EXPECT_TRUE(type_eq);
}

TEST(Uncovered, TrueAgainstBoolLeavesFalse) {
  Fixture f;
  auto a = f.initial({TypeExpr::con("Bool")});
  VarId x = a.patterns[0].id;
  auto u = uncovered(f.ctx, {f.k("True")}, a);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(show(u[0].patterns[0]), "False");
  const Constraint* c = con_eq_on(u[0], x);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->con->name, "False");
}

TEST(Uncovered, UnequalHeadsKeepTheAbstraction) {
  Fixture f;
  ValueAbstraction a;
  a.patterns = {f.k("False")};
  auto u = uncovered(f.ctx, {f.k("True")}, a);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(show(u[0].patterns[0]), "False");
}

TEST(Covered, TrueAgainstBool) {
  Fixture f;
  auto a = f.initial({TypeExpr::con("Bool")});
  VarId x = a.patterns[0].id;
  auto c = covered(f.ctx, {f.k("True")}, a);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(show(c[0].patterns[0]), "True");
  ASSERT_NE(con_eq_on(c[0], x), nullptr);
  EXPECT_EQ(con_eq_on(c[0], x)->con->name, "True");
}

TEST(Covered, ConstructorClash) {
  Fixture f;
  ValueAbstraction a;
  a.patterns = {f.k("False")};
  EXPECT_TRUE(covered(f.ctx, {f.k("True")}, a).empty());
}

TEST(Divergent, ConstructorAgainstVariableRecordsBottom) {
  Fixture f;
  auto a = f.initial({TypeExpr::con("Bool")});
  VarId x = a.patterns[0].id;
  auto d = divergent(f.ctx, {f.k("True")}, a);
  bool found = false;
  for (const auto& v : d) found = found || (v.patterns[0].is_var() && has_constraint(v, Constraint::Kind::Bottom, x));
  EXPECT_TRUE(found);
}

TEST(Divergent, FstForcesOnlyTheTuple) {
  Fixture f("fst :: (a, b) -> a\nfst (x, _) = x\n");
  NameSupply names = NameSupply::for_function(0);
  ResugarMap m;
  auto fn = desugar_function(f.program, f.program.functions[0], names, m);
  AlgorithmContext ctx{f.program, names};
  auto a = initial_abstraction(ctx, fn.arg_types);
  auto d = divergent(ctx, fn.clauses[0].patterns, a);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(d[0].patterns[0].is_var());
  EXPECT_TRUE(has_constraint(d[0], Constraint::Kind::Bottom, a.patterns[0].id));
}

TEST(Analyze, FSecondClauseIsInaccessibleNotRedundant) {
  auto a = analyze("f :: Bool -> Bool -> Int\nf _ True = 1\nf True True = 2\nf _ False = 3\n");
  ASSERT_EQ(a.clauses.size(), 3u);
  EXPECT_TRUE(a.clauses[1].covered.empty());
  EXPECT_FALSE(a.clauses[1].divergent.empty());
  EXPECT_TRUE(a.missing.empty());
}

TEST(Analyze, NotIsExhaustive) {
  auto a = analyze("not :: Bool -> Bool\nnot True = False\nnot False = True\n");
  EXPECT_TRUE(a.missing.empty());
  EXPECT_FALSE(a.clauses[0].covered.empty());
  EXPECT_FALSE(a.clauses[1].covered.empty());
}

TEST(Analyze, PairsMissesExactlyTheSingleton) {
  auto a = analyze("pairs :: [a] -> [(a, a)]\npairs [] = []\npairs (x:y:zz) = (x, y) : pairs zz\n");
  ASSERT_EQ(a.missing.size(), 1u);
  EXPECT_EQ(resugar(a.missing[0].patterns[0], [](VarId) { return std::string("x"); }), "[x]");
}

TEST(Analyze, TrivialOracleKeepsEverything) {
  auto a = analyze("bguard :: Bool -> Int\nbguard x | x = 1\n | not x = 2\n | otherwise = 3\n",
                   OracleBackend::Trivial);
  EXPECT_FALSE(a.clauses[2].covered.empty());
  auto b = analyze("bguard :: Bool -> Int\nbguard x | x = 1\n | not x = 2\n | otherwise = 3\n");
  EXPECT_TRUE(b.clauses[2].covered.empty());
  EXPECT_TRUE(b.clauses[2].divergent.empty());
}

TEST(Analyze, CapMarksIncomplete) {
  auto r = load_program(
      "data C = A | B | D | E\n"
      "s :: C -> C -> C -> Int\n"
      "s A A A = 1\ns B B B = 2\ns D D D = 3\ns E E E = 4\n",
      "s.mf");
  ASSERT_TRUE(r.ok());
  NameSupply names = NameSupply::for_function(0);
  ResugarMap m;
  auto fn = desugar_function(*r.value, r.value->functions[0], names, m);
  Oracle oracle;
  auto small = analyze_function(*r.value, fn, names, oracle, AnalysisOptions{5});
  EXPECT_TRUE(small.incomplete);
  NameSupply names2 = NameSupply::for_function(0);
  auto full = analyze_function(*r.value, fn, names2, oracle);
  EXPECT_FALSE(full.incomplete);
  EXPECT_LE(full.produced, 10000u);
}

TEST(Analyze, GuardTrueIsNeutral) {
  const char* plain = "g :: Bool -> [Bool] -> Int\ng True (x:_) = 1\ng _ [] = 2\n";
  const char* guarded = "g :: Bool -> [Bool] -> Int\ng True (x:_) | True = 1\ng _ [] = 2\n";
  auto a = analyze(plain);
  auto b = analyze(guarded);
  ASSERT_EQ(a.clauses.size(), b.clauses.size());
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    EXPECT_EQ(a.clauses[i].covered.size(), b.clauses[i].covered.size()) << i;
    EXPECT_EQ(a.clauses[i].uncovered.size(), b.clauses[i].uncovered.size()) << i;
    EXPECT_EQ(a.clauses[i].divergent.size(), b.clauses[i].divergent.size()) << i;
    for (std::size_t j = 0; j < a.clauses[i].uncovered.size(); ++j)
      for (std::size_t k = 0; k < 2; ++k)
        EXPECT_EQ(show(a.clauses[i].uncovered[j].patterns[k]), show(b.clauses[i].uncovered[j].patterns[k]));
  }
  EXPECT_EQ(a.missing.size(), b.missing.size());
}

TEST(Analyze, UncoveredGrowthPerClauseIsBounded) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    auto g = testkit::generate_program(seed);
    for (std::size_t i = 0; i < g.program.functions.size(); ++i) {
      NameSupply names = NameSupply::for_function(i);
      ResugarMap m;
      auto fn = desugar_function(g.program, g.program.functions[i], names, m);
      Oracle oracle;
      auto a = analyze_function(g.program, fn, names, oracle);
      ASSERT_FALSE(a.incomplete) << g.source;
      std::size_t nodes_max = 0;
      double bound = complexity_bound(g.program, fn);
      // bound = n * m * c^m, so c^m = bound / (n * m); recover m from the clauses
      for (const auto& c : fn.clauses) {
        std::size_t nodes = 0;
        std::function<void(const CorePattern&)> count = [&](const CorePattern& p) {
          ++nodes;
          for (const auto& q : p.args) count(q);
        };
        for (const auto& p : c.patterns) count(p);
        nodes_max = std::max(nodes_max, nodes);
      }
      double c_pow_m = bound / (static_cast<double>(fn.clauses.size()) * static_cast<double>(std::max<std::size_t>(nodes_max, 1)));
      for (std::size_t k = 0; k < a.clauses.size(); ++k) {
        double before = static_cast<double>(a.before(k).size());
        EXPECT_LE(static_cast<double>(a.clauses[k].uncovered.size()), c_pow_m * std::max(before, 1.0))
            << "seed " << seed << " clause " << k + 1 << "\n" << g.source;
      }
    }
  }
}

#include <gtest/gtest.h>

#include <set>

#include "patcheck/desugar.hpp"

using namespace patcheck;

namespace {

struct Loaded {
  Program program;
  DesugaredFunction fn;
  ResugarMap names;
};

Loaded load(const std::string& src, std::size_t index = 0) {
  auto r = load_program(src, "d.mf");
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front().message);
  Loaded l{std::move(*r.value), {}, {}};
  NameSupply names = NameSupply::for_function(index);
  l.fn = desugar_function(l.program, l.program.functions[index], names, l.names);
  return l;
}

std::string show(const CorePattern& p, const ResugarMap& m) { return resugar(p, m); }

// binding occurrences only; guard expressions mention variables bound earlier
void binders(const CorePattern& p, std::vector<VarId>& out) {
  if (p.is_var()) out.push_back(p.id);
  if (p.is_guard()) {
    binders(p.args[0], out);
    return;
  }
  for (const auto& a : p.args) binders(a, out);
}

}  // namespace

TEST(Desugar, ListLiteralBecomesConsCells) {
  auto l = load("g :: [Bool] -> Int\ng [x, y] = 1\n");
  const CorePattern& p = l.fn.clauses[0].patterns.at(0);
  ASSERT_TRUE(p.is_con());
  EXPECT_EQ(p.con->name, ":");
  ASSERT_EQ(p.args.size(), 2u);
  EXPECT_TRUE(p.args[0].is_var());
  const CorePattern& tail = p.args[1];
  ASSERT_TRUE(tail.is_con());
  EXPECT_EQ(tail.con->name, ":");
  EXPECT_TRUE(tail.args[0].is_var());
  ASSERT_TRUE(tail.args[1].is_con());
  EXPECT_EQ(tail.args[1].con->name, "[]");
  EXPECT_EQ(show(p, l.names), "[x, y]");
}

TEST(Desugar, IntegerLiteralBecomesVariableAndEqualityGuard) {
  auto l = load("g :: Int -> Int\ng 42 = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  ASSERT_EQ(ps.size(), 2u);
  ASSERT_TRUE(ps[0].is_var());
  ASSERT_TRUE(ps[1].is_guard());
  EXPECT_EQ(ps[1].args[0].con->name, "True");
  const Expr& e = *ps[1].expr;
  ASSERT_EQ(e.kind, Expr::Kind::Binary);
  EXPECT_EQ(e.binary_op, BinaryOp::Eq);
  EXPECT_EQ(e.args[0].var, ps[0].id);
  EXPECT_EQ(e.args[1].int_value, 42);
  EXPECT_EQ(l.names.literals.at(ps[0].id), 42);
  EXPECT_EQ(show(ps[0], l.names), "42");
}

TEST(Desugar, NestedLiteralGuardStaysInPlace) {
  auto l = load("data Maybe a = Nothing | Just a\ng :: Maybe Int -> Bool -> Int\ng (Just 0) True = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  ASSERT_EQ(ps.size(), 2u);
  ASSERT_TRUE(ps[0].is_con());
  ASSERT_EQ(ps[0].args.size(), 2u);
  EXPECT_TRUE(ps[0].args[0].is_var());
  EXPECT_TRUE(ps[0].args[1].is_guard());
  EXPECT_TRUE(ps[1].is_con());
}

TEST(Desugar, WildcardsAreFreshUnusedVariables) {
  auto l = load("g :: Bool -> Bool -> Int\ng _ _ = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  ASSERT_EQ(ps.size(), 2u);
  ASSERT_TRUE(ps[0].is_var());
  ASSERT_TRUE(ps[1].is_var());
  EXPECT_NE(ps[0].id, ps[1].id);
  EXPECT_EQ(l.names.names.count(ps[0].id), 0u);
}

TEST(Desugar, ClauseGuardIsTrailingTrueGuard) {
  auto l = load("g :: Int -> Int\ng x | x > 0 = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  ASSERT_EQ(ps.size(), 2u);
  ASSERT_TRUE(ps[1].is_guard());
  ASSERT_TRUE(ps[1].args[0].is_con());
  EXPECT_EQ(ps[1].args[0].con->name, "True");
  EXPECT_EQ(ps[1].expr->args[0].var, ps[0].id);
}

TEST(Desugar, OtherwiseIsTrue) {
  auto l = load("g :: Int -> Int\ng x | otherwise = 1\n");
  const Expr& e = *l.fn.clauses[0].patterns[1].expr;
  EXPECT_EQ(e.kind, Expr::Kind::Bool);
  EXPECT_TRUE(e.bool_value);
}

TEST(Desugar, IdsAreFreshAcrossTheProgram) {
  auto r = load_program(
      "f :: [Bool] -> Int -> Int\nf (x:xs) 1 = 1\nf _ n | n > 2 = 2\n"
      "g :: (Bool, Bool) -> Int\ng (a, _) = 1\ng _ = 2\n",
      "d.mf");
  ASSERT_TRUE(r.ok());
  std::multiset<VarId> ids;
  for (std::size_t i = 0; i < r.value->functions.size(); ++i) {
    NameSupply names = NameSupply::for_function(i);
    ResugarMap m;
    auto fn = desugar_function(*r.value, r.value->functions[i], names, m);
    std::vector<VarId> vs;
    for (const auto& c : fn.clauses)
      for (const auto& p : c.patterns) binders(p, vs);
    ids.insert(vs.begin(), vs.end());
  }
  for (VarId v : ids) EXPECT_EQ(ids.count(v), 1u) << v;
}

TEST(Desugar, ResugarOfSugarFreePatternsIsIdentity) {
  auto l = load(
      "data T = A | B T Bool\n"
      "g :: T -> (Bool, T) -> [Bool] -> Int\n"
      "g (B A x) (True, B t False) (y:ys) = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  EXPECT_EQ(show(ps[0], l.names), "B A x");
  EXPECT_EQ(show(ps[1], l.names), "(True, B t False)");
  EXPECT_EQ(show(ps[2], l.names), "y:ys");
  EXPECT_EQ(resugar(ps[0], l.names, true), "(B A x)");
}

TEST(Desugar, ResugarRendersListAndTupleSugar) {
  auto l = load("g :: [Bool] -> (Bool, Bool) -> Int\ng [x] (a, False) = 1\n");
  const auto& ps = l.fn.clauses[0].patterns;
  EXPECT_EQ(show(ps[0], l.names), "[x]");
  EXPECT_EQ(show(ps[1], l.names), "(a, False)");
}

TEST(RangePostulates, Word8IsBounded) {
  Program p;
  auto w = range_postulates(p, TypeExpr::con("Word8"), 7);
  ASSERT_EQ(w.size(), 2u);
  for (const auto& c : w) EXPECT_EQ(c.kind, Constraint::Kind::Holds);
  EXPECT_EQ(debug_string(w[0]), "holds (v7 >= 0)");
  EXPECT_EQ(debug_string(w[1]), "holds (v7 <= 255)");
  EXPECT_TRUE(range_postulates(p, TypeExpr::con("Int"), 7).empty());
  EXPECT_TRUE(range_postulates(p, TypeExpr::con("Bool"), 7).empty());
}

TEST(Desugar, SpansAndRenderedHeads) {
  auto l = load("bguard :: Bool -> Int\nbguard x | x = 1\n         | not x = 2\n         | otherwise = 3\n");
  ASSERT_EQ(l.fn.clauses.size(), 3u);
  EXPECT_EQ(l.fn.clauses[2].rendered, "bguard x | otherwise");
  EXPECT_EQ(l.fn.clauses[2].source_index, 3u);
  EXPECT_EQ(l.fn.clauses[2].span.line, 4u);
}

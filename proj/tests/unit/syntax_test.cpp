#include <gtest/gtest.h>

#include "patcheck/syntax.hpp"
#include "patcheck/testkit.hpp"

using namespace patcheck;

namespace {

bool mentions(const std::vector<SourceError>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Parse, DataDeclaration) {
  auto r = parse_program("data Maybe a = Nothing | Just a\n", "m.mf");
  ASSERT_TRUE(r.ok());
  auto user = r.value->user_data();
  ASSERT_EQ(user.size(), 1u);
  EXPECT_EQ(user[0]->type_name, "Maybe");
  ASSERT_EQ(user[0]->constructors.size(), 2u);
  EXPECT_EQ(user[0]->constructors[0].arity(), 0u);
  EXPECT_EQ(user[0]->constructors[1].arity(), 1u);
}

TEST(Parse, AbsGuardsBecomeClausesSharingThePattern) {
  auto r = load_program(
      "abs :: Int -> Int\n"
      "abs x | x < 0 = -x\n"
      "      | x > 0 = x\n",
      "abs.mf");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value->functions.size(), 1u);
  const FunctionDef& f = r.value->functions[0];
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[0].patterns, f.clauses[1].patterns);
  EXPECT_EQ(f.clauses[0].patterns[0].kind, SurfacePattern::Kind::Variable);
  ASSERT_TRUE(f.clauses[1].guard.has_value());
  EXPECT_EQ(pretty_print(*f.clauses[1].guard), "x > 0");
}

TEST(Parse, ArityMismatchIsAnError) {
  auto r = parse_program("f = 1\nf x = 2\n", "f.mf");
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.errors.empty());
}

TEST(Parse, ErrorsCarryPositions) {
  auto r = parse_program("data = X\n", "bad.mf");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors[0].span.line, 1u);
  EXPECT_NE(r.errors[0].to_string("bad.mf").find("bad.mf:1:"), std::string::npos);
}

TEST(Parse, RecoversAtDeclarationBoundaries) {
  auto r = parse_program("data = X\nf :: Bool -> Int\ndata Y = = Z\n", "bad.mf");
  EXPECT_GE(r.errors.size(), 2u);
}

TEST(Parse, CommentsAreSkipped) {
  auto r = load_program("-- a comment\nnot :: Bool -> Bool -- trailing\nnot True = False\nnot False = True\n", "n.mf");
  EXPECT_TRUE(r.ok());
}

TEST(Check, DuplicatePatternVariable) {
  auto r = load_program(
      "data Maybe a = Nothing | Just a\n"
      "g :: Maybe Int -> Maybe Int -> Int\n"
      "g (Just x) (Just x) = 1\n",
      "g.mf");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.errors, "x"));
}

TEST(Check, UnsaturatedConstructor) {
  auto r = load_program(
      "data Maybe a = Nothing | Just a\n"
      "g :: Maybe Int -> Int\n"
      "g (Just) = 1\n",
      "g.mf");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.errors, "Just"));
}

TEST(Check, UnknownFunctionInGuardIsOpaque) {
  auto r = load_program(
      "isPrimeAndSmall :: Int -> Bool\n"
      "isPrimeAndSmall x | isPrime x && x < 10 = True\n"
      "                  | not (isPrime x) = False\n",
      "p.mf");
  ASSERT_TRUE(r.ok()) << r.errors.front().message;
  const Expr& g = *r.value->functions[0].clauses[0].guard;
  EXPECT_EQ(g.args[0].kind, Expr::Kind::App);
}

TEST(Check, UnknownVariableInGuardIsRejected) {
  auto r = load_program("h :: Bool -> Int\nh x | y = 1\n", "h.mf");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.errors, "y"));
}

TEST(Check, SignatureArityMustMatch) {
  auto r = load_program("h :: Bool -> Bool -> Int\nh x = 1\n", "h.mf");
  EXPECT_FALSE(r.ok());
}

TEST(Parse, GroupingFollowsSourceOrder) {
  auto r = load_program(
      "a :: Bool -> Int\nb :: Bool -> Int\n"
      "a True = 1\na False = 2\nb _ = 3\n",
      "g.mf");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value->functions.size(), 2u);
  EXPECT_EQ(r.value->functions[0].name, "a");
  EXPECT_EQ(r.value->functions[0].clauses.size(), 2u);
  EXPECT_EQ(r.value->functions[0].clauses[1].patterns[0].bool_value, false);
}

TEST(Parse, PrettyPrintRoundTripOnCorpusShapes) {
  const char* src =
      "data T a = L | N (T a) a (T a)\n"
      "f :: [Bool] -> (Bool, T Int) -> Int -> Int\n"
      "f [] (b, L) 0 = 1\n"
      "f (x:xs) (True, N l v r) (-3) | x && v > 2 * 3 + 1 = 2\n"
      "f [x, y] _ n | not (x == y) || n /= 4 = 3\n";
  auto a = load_program(src, "rt.mf");
  ASSERT_TRUE(a.ok()) << a.errors.front().message;
  std::string printed = pretty_print(*a.value);
  auto b = load_program(printed, "rt.mf");
  ASSERT_TRUE(b.ok()) << printed;
  EXPECT_TRUE(a.value->structurally_equal(*b.value)) << printed;
}

TEST(Parse, PrettyPrintRoundTripOnGeneratedPrograms) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto g = testkit::generate_program(seed);
    std::string printed = pretty_print(g.program);
    auto b = load_program(printed, "rt.mf");
    ASSERT_TRUE(b.ok()) << g.source << "\n---\n" << printed;
    EXPECT_TRUE(g.program.structurally_equal(*b.value)) << g.source << "\n---\n" << printed;
  }
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "patcheck/cli.hpp"
#include "patcheck/report.hpp"

using namespace patcheck;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "patcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(PATCHECK_CORPUS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST(Cli, CleanFileExitsZero) {
  CliRun r = run({corpus("not.mf")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(Cli, WarningsExitOne) {
  CliRun r = run({corpus("abs.mf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("x = 0 :: Int"), std::string::npos);
}

TEST(Cli, UnreadableAndInvalidInputExitTwo) {
  EXPECT_EQ(run({"/nonexistent/file.mf"}).code, 2);
  CliRun bad = run({temp_file("patcheck_bad.mf", "data = X\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("patcheck_bad.mf:1:"), std::string::npos);
  EXPECT_EQ(run({"--oracle", "nope", corpus("not.mf")}).code, 2);
  EXPECT_EQ(run({"--format", "xml", corpus("not.mf")}).code, 2);
}

TEST(Cli, JsonFormatParses) {
  CliRun r = run({"--format", "json", "--evaluatedness", corpus("f.mf")});
  EXPECT_EQ(r.code, 1);
  auto reports = parse_json_report(r.out);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].name, "f");
  EXPECT_EQ(reports[0].evaluatedness.size(), 2u);
}

TEST(Cli, OracleChoiceChangesBguard) {
  CliRun builtin = run({corpus("bguard.mf")});
  CliRun trivial = run({"--oracle", "trivial", corpus("bguard.mf")});
  EXPECT_NE(builtin.out.find("redundant"), std::string::npos);
  EXPECT_EQ(trivial.out.find("redundant"), std::string::npos);
}

TEST(Cli, BrokenExternalSolverDegradesGracefully) {
  CliRun r = run({"--oracle", "external:/nonexistent/solver {file}", corpus("abs.mf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("missing"), std::string::npos);
}

TEST(Cli, DeterministicAcrossJobCounts) {
  std::vector<std::string> files;
  for (const char* f : {"abs.mf", "bguard.mf", "f.mf", "f_prime.mf", "fst.mf", "isPrimeAndSmall.mf", "not.mf",
                        "pairs.mf"})
    files.push_back(corpus(f));
  auto with = [&](const std::string& jobs) {
    std::vector<std::string> a{"--evaluatedness", "--jobs", jobs};
    a.insert(a.end(), files.begin(), files.end());
    return run(a);
  };
  CliRun one = with("1");
  CliRun four = with("4");
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(one.code, four.code);
  EXPECT_EQ(with("4").out, four.out);
}

TEST(Cli, MaxWitnesses) {
  CliRun r = run({"--max-witnesses", "1", temp_file("patcheck_many.mf", "data T = A | B | C\ng :: T -> Int\ng A = 1\n")});
  EXPECT_NE(r.out.find("... and 1 more"), std::string::npos) << r.out;
}

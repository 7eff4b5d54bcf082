#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path data = CUDF_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cudf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const char* name) { return (data / "golden" / name).string(); }
std::string dudf(const char* name) { return (data / "dudf" / name).string(); }

class Scratch : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cudf-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return (dir_ / name).string();
  }
  fs::path dir_;
};

}  // namespace

TEST(Cli, NoArgumentsIsUsage) { EXPECT_EQ(run({}).code, cudf::cli::usage); }

TEST(Cli, UnknownSubcommandIsUsage) { EXPECT_EQ(run({"frobnicate"}).code, cudf::cli::usage); }

TEST(Cli, HelpIsOk) { EXPECT_EQ(run({"--help"}).code, cudf::cli::ok); }

TEST(Cli, CheckGolden) {
  Outcome r = run({"check", "--strict", golden("mta.cudf")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("packages: 3"), std::string::npos);
}

TEST(Cli, CheckRecoveredErrorsFailOnlyStrict) {
  EXPECT_EQ(run({"check", golden("recovery.cudf")}).code, 0);
  Outcome strict = run({"check", "--strict", golden("recovery.cudf")});
  EXPECT_EQ(strict.code, 1);
  EXPECT_NE(strict.err.find(":6: stanza ignored"), std::string::npos) << strict.err;
}

TEST(Cli, CheckJson) {
  Outcome r = run({"check", "--json", golden("recovery.cudf")});
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["packages"], 2);
  EXPECT_EQ(j["recovered_errors"].size(), 1u);
}

TEST(Cli, MissingFileIsUsage) { EXPECT_EQ(run({"check", "/nonexistent/x.cudf"}).code, 2); }

TEST(Cli, FmtMatchesExpected) {
  Outcome r = run({"fmt", golden("messy.cudf")});
  EXPECT_EQ(r.code, 0);
  std::ifstream in(golden("messy.expected"), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(r.out, ss.str());
}

TEST(Cli, CostPresets) {
  Outcome r = run({"cost", golden("mta.cudf"), "--criterion", "min-removed"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "-2\n");
  EXPECT_EQ(run({"cost", golden("mta.cudf"), "--criterion", "fastest"}).code, 2);
  EXPECT_EQ(run({"cost", golden("mta.cudf")}).code, 2);
  EXPECT_EQ(run({"cost", golden("mta.cudf"), "--cost-property", "Price"}).code, 2);
}

TEST_F(Scratch, SolveThenVerify) {
  std::string sol = (dir_ / "sol.txt").string();
  Outcome s = run({"solve", golden("car_glass.cudf"), "--criterion", "min-removed", "--out", sol});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.err.find("cost: "), std::string::npos);
  Outcome v = run({"verify", "--problem", golden("car_glass.cudf"), "--solution", sol, "--explain"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
}

TEST_F(Scratch, VerifyRejectsBadSolution) {
  std::string empty = write("empty.txt", "");
  Outcome v = run({"verify", "--problem", golden("mta.cudf"), "--solution", empty, "--json"});
  EXPECT_EQ(v.code, 1);
  auto j = nlohmann::json::parse(v.out);
  EXPECT_FALSE(j["ok"]);
  std::string unknown = write("unknown.txt", "Package: exim\nVersion: 1\nInstalled: true\n");
  EXPECT_EQ(run({"verify", "--problem", golden("mta.cudf"), "--solution", unknown}).code, 2);
}

TEST_F(Scratch, SolveBudget) {
  EXPECT_EQ(run({"solve", golden("car_glass.cudf"), "--criterion", "min-new", "--budget", "4"}).code, 3);
}

TEST_F(Scratch, SolveNoSolution) {
  std::string f = write("p.cudf", "Package: aa\nVersion: 1\nDepends: zz\n\nProblem: p\nInstall: aa\n");
  EXPECT_EQ(run({"solve", f, "--criterion", "min-new"}).code, 1);
}

TEST_F(Scratch, SolveWithCostProperty) {
  std::string f = write("p.cudf",
                        "Package: aa\nVersion: 1\nPrice: 5\nProvides: ff\n\n"
                        "Package: bb\nVersion: 1\nPrice: 2\nProvides: ff\n\nProblem: p\nInstall: ff\n");
  Outcome r = run({"solve", f, "--cost-property", "Price"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "Package: bb\nVersion: 1\nInstalled: true\n");
}

TEST(Cli, DudfValidate) {
  Outcome ok = run({"dudf", "validate", "--strict", dudf("valid_pair.xml")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("problem/outcome"), std::string::npos);
  Outcome bad = run({"dudf", "validate", dudf("missing_uid.xml")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("/dudf/uid"), std::string::npos);
}

TEST_F(Scratch, DudfConvertThenCheck) {
  std::string out = (dir_ / "converted.cudf").string();
  Outcome c = run({"dudf", "convert", dudf("convertible.xml"), "--out", out});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(run({"check", "--strict", out}).code, 0);
  EXPECT_EQ(run({"dudf", "convert", dudf("valid_pair.xml")}).code, 1);
}

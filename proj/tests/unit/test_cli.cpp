#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "bapa/cli.hpp"

using namespace bapa;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "bapa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("bapa_cli_" + name);
  std::ofstream(p) << text;
  return p.string();
}

const std::string kFix = BAPA_FIXTURE_DIR;

}  // namespace

TEST(Cli, DecideValid) {
  CliRun r = run({"decide", kFix + "/insert_vc.bapa"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid\n");
}

TEST(Cli, DecideInvalid) {
  CliRun r = run({"decide", kFix + "/ex_singleton.bapa"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "invalid\n");
}

TEST(Cli, ParseErrorExitCode) {
  std::string f = temp_file("bad.bapa", "all set x. x = x");
  CliRun r = run({"decide", f});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(f + ":1:"), std::string::npos) << r.err;
}

TEST(Cli, MissingFile) { EXPECT_EQ(run({"decide", "/nonexistent.bapa"}).code, 2); }

TEST(Cli, BadFlag) { EXPECT_EQ(run({"decide", "--mode", "weird", kFix + "/insert_vc.bapa"}).code, 2); }

TEST(Cli, Stats) {
  CliRun r = run({"decide", "--stats", kFix + "/insert_vc.bapa"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"set_vars\":3"), std::string::npos) << r.out;
}

TEST(Cli, OracleSweep) {
  CliRun r = run({"oracle", "--sweep", "2", kFix + "/ex_singleton.bapa"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "u=0: false\nu=1: true\nu=2: true\n");
}

TEST(Cli, VcgenAndOpenAs) {
  EXPECT_EQ(run({"vcgen", kFix + "/insert.schema"}).code, 0);
  std::string f = temp_file("open.bapa", "free y : set. card(y) = 0");
  EXPECT_EQ(run({"decide", f}).code, 1);
  EXPECT_EQ(run({"decide", "--open-as", "exists", f}).code, 0);
}

TEST(Cli, InfiniteMode) {
  std::string f = temp_file("finu.bapa", "fin(univ)");
  EXPECT_EQ(run({"decide", f}).code, 0);
  EXPECT_EQ(run({"decide", "--mode", "infinite", f}).code, 1);
}

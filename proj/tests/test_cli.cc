// Copyright 2026 The sensched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "reference.h"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
};

// Runs the CLI with stdout and stderr captured together.
CliRun run(const std::string& args) {
  const std::string cmd = std::string(SENSCHED_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sensched_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  static std::string scenario(const std::string& a, const std::string& schedule) {
    return R"({"n": 2, "M": 2, "A": )" + a +
           R"(, "proc_noise": [[1, 0], [0, 1]],
  "sensors": [{"C": [[1, 0]], "meas_noise": [[1]]}, {"C": [[0, 1]], "meas_noise": [[1]]}],
  "phi0": [[0, 0], [0, 0]], "schedule": )" +
           schedule + "}";
  }

  fs::path dir_;
};

const std::string kEx = "[[2, 0], [0, 0]]";
const std::string kZero = "[[0, 0], [0, 0]]";
const std::string kWord1 = R"({"type": "periodic", "word": [1]})";

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

double field(const std::string& line, int index) {
  std::istringstream in(line);
  std::string cell;
  for (int i = 0; i <= index; ++i) std::getline(in, cell, ',');
  return std::stod(cell);
}

TEST_F(CliTest, HelpOnEveryCommand) {
  for (const std::string& cmd : {"", "simulate ", "search ", "approx ", "verify "}) {
    const CliRun r = run(cmd + "--help");
    EXPECT_EQ(r.code, 0) << cmd;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << cmd;
  }
}

TEST_F(CliTest, SimulateExampleTail) {
  const std::string sc = write("ex.json", scenario(kEx, kWord1));
  const CliRun r = run("simulate " + sc + " --horizon 100 --out " + path("t.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = lines(read("t.csv"));
  ASSERT_EQ(rows.size(), 102u);
  const double target = sensched::testing::reference_phistar(2, 1, 1) + 1.0;
  EXPECT_NEAR(field(rows.back(), 1), target, 1e-3);
  EXPECT_EQ(field(rows.back(), 0), 100.0);
}

TEST_F(CliTest, SimulateZeroDynamicsIsConstant) {
  const std::string sc = write("z.json", scenario(kZero, R"({"type": "periodic", "word": [1, 2]})"));
  const CliRun r = run("simulate " + sc + " --horizon 5 --out " + path("z.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = lines(read("z.csv"));
  for (std::size_t i = 3; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].substr(rows[i].find(',')), rows[2].substr(rows[2].find(',')));
  }
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::string sc = write("ex.json", scenario(kEx, kWord1));
  EXPECT_EQ(run("simulate " + sc + " --horizon 30").out, run("simulate " + sc + " --horizon 30").out);
}

TEST_F(CliTest, MalformedScenarioExitsTwo) {
  std::string text = scenario(kEx, kWord1);
  text.replace(text.find("\"proc_noise\""), std::string("\"proc_noise\": [[1, 0], [0, 1]],").size(), "");
  const CliRun r = run("simulate " + write("bad.json", text) + " --horizon 5");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("proc_noise"), std::string::npos);
  EXPECT_EQ(run("simulate " + path("missing.json")).code, 2);
}

TEST_F(CliTest, SearchExample) {
  const std::string sc = write("ex.json", scenario(kEx, kWord1));
  const CliRun r = run("search " + sc + " --max-period 3 --out " + path("p.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"best_word\":[1]"), std::string::npos);
  EXPECT_NE(r.out.find("\"explored\""), std::string::npos);
  EXPECT_NE(r.out.find("\"pruned\""), std::string::npos);
  EXPECT_NE(r.out.find("5.236067977"), std::string::npos);
  EXPECT_EQ(lines(read("p.csv")).front(), "period,best_word,best_cost");
}

TEST_F(CliTest, SearchZeroDynamics) {
  const CliRun r = run("search " + write("z.json", scenario(kZero, kWord1)) + " --max-period 2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"best_word\":[1],\"best_cost\":2.0"), std::string::npos) << r.out;
}

TEST_F(CliTest, SearchOverBudgetExitsThree) {
  const CliRun r = run("search " + write("ex.json", scenario(kEx, kWord1)) + " --max-period 40");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("budget exceeded"), std::string::npos);
}

TEST_F(CliTest, ApproxPeriodic) {
  const CliRun r = run("approx " + write("ex.json", scenario(kEx, kWord1)) + " --delta 1e-6");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"target_exact\":true"), std::string::npos);
}

TEST_F(CliTest, ApproxPseudoRandom) {
  // Two sensors that each observe the whole state.
  const std::string text = R"({"n": 2, "M": 2, "A": [[1.1, 0.3], [0, 0.9]],
  "proc_noise": [[1, 0], [0, 1]],
  "sensors": [{"C": [[1, 0.5]], "meas_noise": [[1]]}, {"C": [[0.2, 1]], "meas_noise": [[2]]}],
  "schedule": {"type": "generated", "rule": "pseudo_random", "params": {"seed": 11}}})";
  const CliRun r = run("approx " + write("pr.json", text) + " --delta 1e-2 --out " + path("a.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const std::size_t at = r.out.find("\"gap\":");
  ASSERT_NE(at, std::string::npos);
  EXPECT_LT(std::stod(r.out.substr(at + 6)), 1e-2);
  EXPECT_NE(read("a.json").find("\"word\""), std::string::npos);
}

TEST_F(CliTest, ApproxInfeasibleExitsFour) {
  const CliRun r = run("approx " + write("d.json", scenario(kEx, R"({"type": "periodic", "word": [2]})")) +
                    " --delta 1e-2");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("feasibility check failed"), std::string::npos);
}

TEST_F(CliTest, VerifySingleSuiteAndErrors) {
  const CliRun r = run("verify --suite lemma1 --seed 42");
  EXPECT_EQ(r.code, 0) << r.out;
  std::size_t reports = 0;
  for (const std::string& l : lines(r.out)) reports += l.rfind("[PASS]", 0) == 0 || l.rfind("[FAIL]", 0) == 0;
  EXPECT_EQ(reports, 1u);
  EXPECT_EQ(run("verify --suite nope --seed 1").code, 2);
  EXPECT_EQ(run("verify --suite lemma1").code, 2);
}

TEST_F(CliTest, VerifyAllPassesWithSeed42) {
  const CliRun r = run("verify --suite all --seed 42");
  EXPECT_EQ(r.code, 0) << r.out;
}

}  // namespace

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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sensched/errors.h"
#include "sensched/random_system.h"
#include "sensched/scenario.h"

namespace sensched {
namespace {

const char* kExample = R"({
  "n": 2, "M": 2,
  "A": [[2, 0], [0, 0]],
  "proc_noise": [[1, 0], [0, 1]],
  "sensors": [{"C": [[1, 0]], "meas_noise": [[1]]},
              {"C": [[0, 1]], "meas_noise": [[1]]}],
  "phi0": [[0, 0], [0, 0]],
  "schedule": {"type": "periodic", "word": [1]},
  "config": {"horizon": 2000, "fp_tol": 1e-10}
})";

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

TEST(Scenario, ParsesExample) {
  const Scenario s = parse_scenario(kExample);
  EXPECT_EQ(s.model.state_dim(), 2);
  EXPECT_EQ(s.model.num_sensors(), 2);
  EXPECT_EQ(s.model.A()(0, 0), 2.0);
  ASSERT_TRUE(s.phi0.has_value());
  EXPECT_EQ(s.make_schedule().prefix(3), (SensorWord{1, 1, 1}));
  EXPECT_EQ(s.config.at("horizon"), 2000.0);
}

TEST(Scenario, StrictKeys) {
  EXPECT_NE(message_of(replace(kExample, "\"phi0\"", "\"phi_0\"")).find("'phi_0'"),
            std::string::npos);
  EXPECT_NE(message_of(replace(kExample, "\"meas_noise\": [[1]]}]", "\"meas_noise\": [[1]], \"R\": 1}]"))
                .find("'R'"),
            std::string::npos);
  EXPECT_NE(message_of(replace(kExample, "\"horizon\"", "\"horizn\"")).find("'horizn'"),
            std::string::npos);
}

TEST(Scenario, MissingKeyIsNamed) {
  const std::string text = replace(kExample, "\"proc_noise\": [[1, 0], [0, 1]],", "");
  EXPECT_NE(message_of(text).find("proc_noise"), std::string::npos);
}

TEST(Scenario, ShapeAndValidationErrors) {
  EXPECT_NE(message_of(replace(kExample, "[[2, 0], [0, 0]]", "[[2, 0]]")).find("'A'"),
            std::string::npos);
  EXPECT_NE(message_of(replace(kExample, "\"C\": [[1, 0]]", "\"C\": [[1, 0, 0]]")).find("'C'"),
            std::string::npos);
  EXPECT_NE(message_of(replace(kExample, "\"word\": [1]", "\"word\": [3]")), "");
  EXPECT_NE(message_of(replace(kExample, "[[1, 0], [0, 1]]", "[[0, 0], [0, 0]]"))
                .find("lambda_w_minus > 0"),
            std::string::npos);
  EXPECT_NE(message_of("{not json"), "");
}

TEST(Scenario, GeneratedSchedules) {
  const Scenario s = parse_scenario(replace(
      kExample, R"({"type": "periodic", "word": [1]})",
      R"({"type": "generated", "rule": "example1", "params": {"lambda": 2, "k_max": 3}})"));
  EXPECT_EQ(s.make_schedule().prefix(2), (SensorWord{2, 1}));
  const Scenario r = parse_scenario(replace(
      kExample, R"({"type": "periodic", "word": [1]})",
      R"({"type": "generated", "rule": "pseudo_random", "params": {"seed": 4}})"));
  EXPECT_EQ(r.make_schedule().prefix(50), pseudo_random_schedule(4, 2).prefix(50));
  EXPECT_NE(message_of(replace(kExample, R"({"type": "periodic", "word": [1]})",
                               R"({"type": "generated", "rule": "pseudo_random", "params": {"sed": 4}})"))
                .find("'sed'"),
            std::string::npos);
}

TEST(Scenario, RoundTrip) {
  const Scenario a = parse_scenario(kExample);
  const Scenario b = parse_scenario(serialize_scenario(a));
  EXPECT_TRUE(a == b);
  std::mt19937_64 rng(71);
  for (int i = 0; i < 30; ++i) {
    Scenario s{random_system(rng), random_psd(rng, 2, 1.0), ScheduleEntry{"periodic", {1}, "", {}},
               {{"seed", 3}}};
    if (s.phi0->dim() != s.model.state_dim()) s.phi0.reset();
    const Scenario back = parse_scenario(serialize_scenario(s));
    EXPECT_TRUE(same_model(s.model, back.model));
    EXPECT_TRUE(s == back);
  }
}

TEST(Csv, FormatAndDeterminism) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  const Scenario s = parse_scenario(kExample);
  const std::string a = trajectory_table(s, 3).str();
  EXPECT_EQ(a, trajectory_table(s, 3).str());
  EXPECT_EQ(a.find('\r'), std::string::npos);
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,trace,lambda_max,sigma_1_1,sigma_1_2,sigma_2_1,sigma_2_2");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0,0,0,0,0");
  std::getline(in, line);
  EXPECT_EQ(line, "1,2,1,1,0,0,1");
}

TEST(Csv, FiniteScheduleShorterThanHorizon) {
  const Scenario s =
      parse_scenario(replace(kExample, R"("periodic", "word": [1])", R"("finite", "word": [1, 2])"));
  EXPECT_NO_THROW(trajectory_table(s, 2));
  EXPECT_THROW(trajectory_table(s, 3), InputError);
}

TEST(AtomicWrite, ReplacesContents) {
  const auto dir = std::filesystem::temp_directory_path() / "sensched_atomic_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sensched

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

#ifndef SENSCHED_SCENARIO_H_
#define SENSCHED_SCENARIO_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sensched/model.h"
#include "sensched/schedule.h"

namespace sensched {

// Schedule description as written in a scenario file.
struct ScheduleEntry {
  std::string type;                       // "finite", "periodic" or "generated"
  SensorWord word;                        // finite and periodic
  std::string rule;                       // generated: "example1" or "pseudo_random"
  std::map<std::string, double> params;   // generated
  bool operator==(const ScheduleEntry&) const = default;
};

// Numeric run settings. Only the keys present in the file are set.
using RunConfig = std::map<std::string, double>;

// Keys accepted inside "config".
const std::vector<std::string>& run_config_keys();

struct Scenario {
  SystemModel model;
  std::optional<CovMatrix> phi0;
  std::optional<ScheduleEntry> schedule;
  RunConfig config;

  // phi0 when given, otherwise the process noise covariance.
  CovMatrix initial_covariance() const;
  // Throws InputError when no schedule is given.
  Schedule make_schedule() const;
};

bool same_model(const SystemModel& a, const SystemModel& b);
bool operator==(const Scenario& a, const Scenario& b);

// Strict parser: unknown keys, missing keys, shape mismatches and failed
// validation all throw InputError naming the offending key.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

Schedule build_schedule(const ScheduleEntry& entry, int num_sensors);

// Shortest decimal text that round-trips to the same double, or 17 digits.
std::string format_double(double v);

// Writes via a temporary file in the same directory followed by a rename.
void write_file_atomic(const std::string& path, const std::string& contents);

// Simple CSV table with 17 significant digit numeric cells and LF endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  void add_row(const std::vector<std::string>& row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> lines_;
};

// Rows t = 0..T of (t, trace, lambda_max, sigma_i_j) for the scenario's schedule.
CsvTable trajectory_table(const Scenario& scenario, std::int64_t horizon);

}  // namespace sensched

#endif  // SENSCHED_SCENARIO_H_

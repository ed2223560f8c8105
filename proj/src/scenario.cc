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

#include "sensched/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sensched/errors.h"

namespace sensched {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw InputError(where + ": unknown key '" + item.key() + "'");
    }
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw InputError("key '" + key + "': expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InputError("key '" + key + "': expected an integer");
  return v.get<int>();
}

Eigen::MatrixXd matrix(const json& v, const std::string& key, int rows, int cols) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    throw InputError("key '" + key + "': expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw InputError("key '" + key + "': row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = number(row[static_cast<std::size_t>(j)], key);
  }
  return m;
}

int row_count(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw InputError("key '" + key + "': expected a nested array");
  return static_cast<int>(v.size());
}

CovMatrix covariance(const json& v, const std::string& key, int dim) {
  const Eigen::MatrixXd m = matrix(v, key, dim, dim);
  try {
    return CovMatrix(m);
  } catch (const Error& e) {
    throw InputError("key '" + key + "': " + e.what());
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

SensorWord parse_word(const json& v) {
  if (!v.is_array()) throw InputError("key 'word': expected an array of sensor ids");
  SensorWord word;
  for (const json& x : v) word.push_back(integer(x, "word"));
  return word;
}

ScheduleEntry parse_schedule(const json& v) {
  if (!v.is_object()) throw InputError("key 'schedule': expected an object");
  if (!v.contains("type") || !v["type"].is_string()) {
    throw InputError("schedule: missing key 'type'");
  }
  ScheduleEntry entry;
  entry.type = v["type"].get<std::string>();
  if (entry.type == "finite" || entry.type == "periodic") {
    require_keys(v, "schedule", {"type", "word"}, {"type", "word"});
    entry.word = parse_word(v["word"]);
  } else if (entry.type == "generated") {
    require_keys(v, "schedule", {"type", "rule", "params"}, {"type", "rule"});
    if (!v["rule"].is_string()) throw InputError("key 'rule': expected a string");
    entry.rule = v["rule"].get<std::string>();
    if (v.contains("params")) {
      if (!v["params"].is_object()) throw InputError("key 'params': expected an object");
      for (const auto& item : v["params"].items()) {
        entry.params[item.key()] = number(item.value(), item.key());
      }
    }
  } else {
    throw InputError("key 'type': unknown schedule type '" + entry.type + "'");
  }
  return entry;
}

double param(const ScheduleEntry& entry, const std::string& key) {
  const auto it = entry.params.find(key);
  if (it == entry.params.end()) {
    throw InputError("rule '" + entry.rule + "': missing key '" + key + "'");
  }
  return it->second;
}

void require_param_keys(const ScheduleEntry& entry, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : entry.params) {
    if (!allowed.count(key)) {
      throw InputError("rule '" + entry.rule + "': unknown key '" + key + "'");
    }
  }
}

int whole(double v, const std::string& key) {
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw InputError("key '" + key + "': expected an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys{
      "horizon",  "burn_in",  "window",    "conv_tol",  "fp_tol",    "max_iters",
      "budget",   "max_steps", "bound_cap", "seed",      "radius",    "t_sim",
      "lookahead", "prune",    "delta",     "max_period", "n_runs"};
  return keys;
}

CovMatrix Scenario::initial_covariance() const {
  return phi0 ? *phi0 : model.proc_noise();
}

Schedule Scenario::make_schedule() const {
  if (!schedule) throw InputError("scenario: missing key 'schedule'");
  return build_schedule(*schedule, model.num_sensors());
}

Schedule build_schedule(const ScheduleEntry& entry, int num_sensors) {
  if (entry.type == "finite" || entry.type == "periodic") {
    if (entry.word.empty()) throw InputError("key 'word': must not be empty");
    Schedule s = entry.type == "finite" ? Schedule::Finite(entry.word)
                                       : Schedule::Periodic(entry.word);
    s.check_indices(num_sensors);
    return s;
  }
  if (entry.rule == "pseudo_random") {
    require_param_keys(entry, {"seed"});
    const double seed = param(entry, "seed");
    if (seed < 0 || seed != std::floor(seed) || seed > 9.0e15) {
      throw InputError("key 'seed': expected a nonnegative integer");
    }
    return pseudo_random_schedule(static_cast<std::uint64_t>(seed), num_sensors);
  }
  if (entry.rule == "example1") {
    require_param_keys(entry, {"lambda", "k_max"});
    if (num_sensors < 2) throw InputError("rule 'example1' needs M >= 2");
    const int k_max = entry.params.count("k_max") ? whole(param(entry, "k_max"), "k_max") : 6;
    return example1_schedule(whole(param(entry, "lambda"), "lambda"), k_max).schedule;
  }
  throw InputError("key 'rule': unknown rule '" + entry.rule + "'");
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario is not valid JSON: ") + e.what());
  }
  require_keys(doc, "scenario",
               {"n", "M", "A", "proc_noise", "sensors", "phi0", "schedule", "config"},
               {"n", "M", "A", "proc_noise", "sensors"});
  const int n = integer(doc["n"], "n");
  const int m = integer(doc["M"], "M");
  if (n < 1) throw InputError("key 'n': must be >= 1");
  if (m < 1) throw InputError("key 'M': must be >= 1");

  const Eigen::MatrixXd A = matrix(doc["A"], "A", n, n);
  const CovMatrix proc_noise = covariance(doc["proc_noise"], "proc_noise", n);
  const json& sensors_json = doc["sensors"];
  if (!sensors_json.is_array() || static_cast<int>(sensors_json.size()) != m) {
    throw InputError("key 'sensors': expected " + std::to_string(m) + " entries");
  }
  std::vector<SensorModel> sensors;
  for (const json& s : sensors_json) {
    require_keys(s, "sensors[" + std::to_string(sensors.size()) + "]", {"C", "meas_noise"},
                 {"C", "meas_noise"});
    const int p = row_count(s["C"], "C");
    sensors.push_back({matrix(s["C"], "C", p, n), covariance(s["meas_noise"], "meas_noise", p)});
  }

  Scenario scenario{SystemModel(A, proc_noise, std::move(sensors)), std::nullopt,
                    std::nullopt, {}};
  require_valid(scenario.model);
  if (doc.contains("phi0")) scenario.phi0 = covariance(doc["phi0"], "phi0", n);
  if (doc.contains("schedule")) {
    scenario.schedule = parse_schedule(doc["schedule"]);
    build_schedule(*scenario.schedule, m);
  }
  if (doc.contains("config")) {
    const auto& keys = run_config_keys();
    const std::set<std::string> allowed(keys.begin(), keys.end());
    require_keys(doc["config"], "config", allowed, {});
    for (const auto& item : doc["config"].items()) {
      const json& v = item.value();
      scenario.config[item.key()] = v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0)
                                                   : number(v, item.key());
    }
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  const SystemModel& model = scenario.model;
  json doc = json::object();
  doc["n"] = model.state_dim();
  doc["M"] = model.num_sensors();
  doc["A"] = matrix_json(model.A());
  doc["proc_noise"] = matrix_json(model.proc_noise().matrix());
  json sensors = json::array();
  for (const SensorModel& s : model.sensors()) {
    sensors.push_back({{"C", matrix_json(s.C)}, {"meas_noise", matrix_json(s.meas_noise.matrix())}});
  }
  doc["sensors"] = sensors;
  if (scenario.phi0) doc["phi0"] = matrix_json(scenario.phi0->matrix());
  if (scenario.schedule) {
    const ScheduleEntry& entry = *scenario.schedule;
    json s = {{"type", entry.type}};
    if (entry.type == "generated") {
      s["rule"] = entry.rule;
      s["params"] = entry.params;
    } else {
      s["word"] = entry.word;
    }
    doc["schedule"] = s;
  }
  if (!scenario.config.empty()) doc["config"] = scenario.config;
  return doc.dump(2) + "\n";
}

bool same_model(const SystemModel& a, const SystemModel& b) {
  if (a.A() != b.A() || !(a.proc_noise() == b.proc_noise())) return false;
  if (a.num_sensors() != b.num_sensors()) return false;
  for (int i = 1; i <= a.num_sensors(); ++i) {
    const SensorModel& x = a.sensor(i);
    const SensorModel& y = b.sensor(i);
    if (x.C.rows() != y.C.rows() || x.C.cols() != y.C.cols()) return false;
    if (x.C != y.C || !(x.meas_noise == y.meas_noise)) return false;
  }
  return true;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return same_model(a.model, b.model) && a.phi0 == b.phi0 && a.schedule == b.schedule &&
         a.config == b.config;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename onto '" + path + "': " + ec.message());
  }
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) throw InputError("csv row width mismatch");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += row[i];
  }
  lines_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const std::string& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

CsvTable trajectory_table(const Scenario& scenario, std::int64_t horizon) {
  if (horizon < 0) throw InputError("horizon must be >= 0");
  const int n = scenario.model.state_dim();
  std::vector<std::string> header{"t", "trace", "lambda_max"};
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      header.push_back("sigma_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  CsvTable table(header);
  const CovMatrix init = scenario.initial_covariance();
  std::vector<CovMatrix> states{init};
  if (horizon > 0) {
    const Schedule sched = scenario.make_schedule();
    const std::optional<std::int64_t> len = sched.length();
    if (len && *len < horizon) {
      throw InputError("finite schedule has " + std::to_string(*len) +
                       " steps, fewer than the horizon");
    }
    const Trajectory traj = propagate(scenario.model, init, sched.prefix(horizon));
    states.insert(states.end(), traj.covs.begin(), traj.covs.end());
  }
  for (std::size_t t = 0; t < states.size(); ++t) {
    const CovMatrix& s = states[t];
    std::vector<double> row{static_cast<double>(t), s.trace(), s.lambda_max()};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) row.push_back(s.matrix()(i, j));
    }
    table.add_row(row);
  }
  return table;
}

}  // namespace sensched

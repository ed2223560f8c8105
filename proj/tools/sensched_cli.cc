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

// Command-line front end: simulate, search, approx and verify.
//
// Exit codes: 0 success, 1 failed checks or other errors, 2 input errors,
// 3 budget errors, 4 feasibility errors.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sensched/errors.h"
#include "sensched/periodic.h"
#include "sensched/scenario.h"
#include "sensched/search.h"
#include "sensched/verify.h"

namespace {

using namespace sensched;
using nlohmann::ordered_json;

void emit(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
  } else {
    write_file_atomic(out, contents);
  }
}

double config_or(const Scenario& s, const std::string& key, double fallback) {
  const auto it = s.config.find(key);
  return it == s.config.end() ? fallback : it->second;
}

FixedPointConfig fixed_point_config(const Scenario& s) {
  FixedPointConfig c;
  c.fp_tol = config_or(s, "fp_tol", c.fp_tol);
  c.max_iters = static_cast<int>(config_or(s, "max_iters", c.max_iters));
  return c;
}

LimsupConfig limsup_config(const Scenario& s) {
  LimsupConfig c;
  c.burn_in = static_cast<std::int64_t>(config_or(s, "burn_in", static_cast<double>(c.burn_in)));
  c.horizon = static_cast<std::int64_t>(config_or(s, "horizon", static_cast<double>(c.horizon)));
  c.window = static_cast<std::int64_t>(config_or(s, "window", static_cast<double>(c.window)));
  c.conv_tol = config_or(s, "conv_tol", c.conv_tol);
  return c;
}

FeasibilityConfig feasibility_config(const Scenario& s) {
  FeasibilityConfig c;
  c.max_steps =
      static_cast<std::int64_t>(config_or(s, "max_steps", static_cast<double>(c.max_steps)));
  if (s.config.count("bound_cap")) c.bound_cap = s.config.at("bound_cap");
  return c;
}

int cmd_simulate(const std::string& path, std::optional<std::int64_t> horizon,
                 const std::string& out) {
  const Scenario s = load_scenario(path);
  const std::int64_t t =
      horizon ? *horizon : static_cast<std::int64_t>(config_or(s, "horizon", 100));
  emit(out, trajectory_table(s, t).str());
  return 0;
}

int cmd_search(const std::string& path, std::optional<int> max_period,
               const std::string& out) {
  const Scenario s = load_scenario(path);
  SearchConfig config;
  config.budget = static_cast<std::int64_t>(config_or(s, "budget", static_cast<double>(config.budget)));
  config.prune = config_or(s, "prune", 1.0) != 0.0;
  config.lookahead = static_cast<int>(config_or(s, "lookahead", config.lookahead));
  config.fixed_point = fixed_point_config(s);
  const int L = max_period ? *max_period : static_cast<int>(config_or(s, "max_period", 3));
  const SearchResult r = enumerate_periodic(s.model, L, config);

  ordered_json rec;
  rec["best_word"] = r.best_word;
  rec["best_cost"] = r.best_cost;
  rec["explored"] = r.explored;
  rec["pruned"] = r.pruned;
  rec["dominated_prefixes"] = r.dominated_prefixes;
  rec["infeasible"] = r.infeasible;
  rec["max_period"] = L;
  std::cout << rec.dump() << "\n";

  if (!out.empty()) {
    CsvTable table({"period", "best_word", "best_cost"});
    for (const auto& [period, best] : r.per_period_best) {
      table.add_row({std::to_string(period), word_to_string(best.word),
                     format_double(best.cost)});
    }
    emit(out, table.str());
  }
  return 0;
}

int cmd_approx(const std::string& path, double delta, const std::string& out) {
  const Scenario s = load_scenario(path);
  ApproxConfig config;
  config.phi0 = s.initial_covariance();
  if (s.config.count("radius")) config.radius = s.config.at("radius");
  config.t_sim = static_cast<std::int64_t>(config_or(s, "t_sim", static_cast<double>(config.t_sim)));
  config.feasibility = feasibility_config(s);
  config.target = limsup_config(s);
  config.fixed_point = fixed_point_config(s);
  const ApproxResult r = universal_approx_construct(s.model, s.make_schedule(), delta, config);

  ordered_json rec;
  rec["period"] = r.word.size();
  rec["cycle_cost"] = r.cycle_cost;
  rec["target_cost"] = r.target_cost;
  rec["target_exact"] = r.target_exact;
  rec["gap"] = r.gap;
  rec["delta"] = delta;
  rec["radius"] = r.radius;
  rec["l0"] = r.l0;
  rec["l"] = r.l;
  rec["n_k"] = r.n_k;
  std::cout << rec.dump() << "\n";
  if (!out.empty()) {
    ordered_json doc = rec;
    doc["word"] = r.word;
    emit(out, doc.dump() + "\n");
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const std::vector<CheckReport> reports = run_suite(suite, seed);
  bool ok = true;
  for (const CheckReport& r : reports) {
    std::cout << r.to_text();
    ok = ok && r.pass;
  }
  std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor scheduling for Kalman filtering: simulation, search and checks"};
  app.require_subcommand(1);

  std::string scenario, out;
  std::optional<std::int64_t> horizon;
  std::optional<int> max_period;
  double delta = 1e-2;
  std::string suite = "all";
  std::uint64_t seed = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "Propagate the covariance and write CSV");
  simulate->add_option("scenario", scenario, "Scenario JSON file")->required();
  simulate->add_option("--horizon", horizon, "Number of steps T");
  simulate->add_option("--out", out, "Output CSV path (stdout when omitted)");

  CLI::App* search = app.add_subcommand("search", "Search periodic schedules up to a period");
  search->add_option("scenario", scenario, "Scenario JSON file")->required();
  search->add_option("--max-period", max_period, "Largest period L");
  search->add_option("--out", out, "Per-period CSV path");

  CLI::App* approx = app.add_subcommand("approx", "Periodic approximation of a schedule");
  approx->add_option("scenario", scenario, "Scenario JSON file")->required();
  approx->add_option("--delta", delta, "Target cost gap")->check(CLI::PositiveNumber);
  approx->add_option("--out", out, "Output JSON path with the period word");

  CLI::App* verify = app.add_subcommand("verify", "Run the property check suites");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  verify->add_option("--seed", seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return cmd_simulate(scenario, horizon, out);
    if (*search) return cmd_search(scenario, max_period, out);
    if (*approx) return cmd_approx(scenario, delta, out);
    if (*verify) return cmd_verify(suite, seed);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const FeasibilityError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

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

#ifndef SENSCHED_SCHEDULE_H_
#define SENSCHED_SCHEDULE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sensched/model.h"
#include "sensched/riccati.h"

namespace sensched {

// A sensor schedule sigma: Z+ -> {1..M}.
//
// Finite schedules are defined on [0, N); periodic ones repeat their word;
// generated ones evaluate a pure rule of t. Periodic words are stored in the
// phase they were given; canonical_word() returns the minimal rotation.
class Schedule {
 public:
  enum class Kind { kFinite, kPeriodic, kGenerated };
  using Rule = std::function<int(std::int64_t)>;

  static Schedule Finite(SensorWord word);
  static Schedule Periodic(SensorWord word);
  static Schedule Generated(std::string rule_name,
                            std::map<std::string, double> params, Rule rule);

  Kind kind() const { return kind_; }
  bool is_periodic() const { return kind_ == Kind::kPeriodic; }

  int at(std::int64_t t) const;
  SensorWord prefix(std::int64_t length) const;
  // Steps [offset, offset + length).
  SensorWord slice(std::int64_t offset, std::int64_t length) const;

  // Finite: the whole word. Periodic: one period. Empty for generated.
  const SensorWord& word() const { return word_; }
  SensorWord canonical_word() const;

  // Defined steps for finite schedules; nullopt when the schedule is infinite.
  std::optional<std::int64_t> length() const;

  const std::string& rule_name() const { return rule_name_; }
  const std::map<std::string, double>& params() const { return params_; }

  // Throws InputError when a stored index falls outside 1..M.
  void check_indices(int num_sensors) const;

 private:
  Schedule() = default;

  Kind kind_ = Kind::kFinite;
  SensorWord word_;
  std::string rule_name_;
  std::map<std::string, double> params_;
  Rule rule_;
};

// Lexicographically minimal rotation (Booth's algorithm).
SensorWord canonical_rotation(const SensorWord& word);
// True iff the word is strictly smaller than all of its proper rotations.
bool is_lyndon(const SensorWord& word);

std::string word_to_string(const SensorWord& word);

// Deterministic rule mixing (seed, t) through SplitMix64; uniform over 1..M.
Schedule pseudo_random_schedule(std::uint64_t seed, int num_sensors);

// J_N = sum_{t=1}^{N} tr(Sigma_t).
double total_cost(const SystemModel& model, const CovMatrix& phi,
                  const Schedule& sched, std::int64_t horizon);
// J_N / N.
double avg_cost(const SystemModel& model, const CovMatrix& phi,
                const Schedule& sched, std::int64_t horizon);

struct LimsupConfig {
  std::int64_t burn_in = 200;
  std::int64_t horizon = 2000;
  std::int64_t window = 200;
  double conv_tol = 1e-6;
};

// Finite-horizon surrogate for limsup J_N / N. This is an estimate, not the
// exact limsup.
//
// The estimate is the max (and min, for liminf) over N in the window
// [max(burn_in + 1, horizon - window), horizon] of the post-burn-in average
// (J_N - J_{burn_in}) / (N - burn_in). `converged` is set when the window
// spread is below conv_tol and the window max moved by less than conv_tol
// when the horizon was doubled once.
struct CostSeries {
  std::vector<double> totals;    // J_N, N = 1..horizon
  std::vector<double> averages;  // J_N / N
  std::int64_t burn_in = 0;
  std::int64_t window_begin = 0;
  std::int64_t window_end = 0;
  double limsup_estimate = 0.0;
  double liminf_estimate = 0.0;
  double doubled_limsup_estimate = 0.0;
  bool converged = false;

  static constexpr const char* kMethod =
      "windowed max of post-burn-in running averages with one horizon doubling";
};

CostSeries limsup_cost(const SystemModel& model, const CovMatrix& phi,
                       const Schedule& sched, const LimsupConfig& config = {});

struct FeasibilityConfig {
  std::int64_t max_steps = 2000;
  std::optional<double> bound_cap;  // default 1e8 * tr(proc_noise)
};

// Finite-horizon evidence only: a bounded run up to max_steps says nothing
// about later steps.
struct FeasibilityResult {
  bool feasible = false;
  double beta_observed = 0.0;  // max_t lambda_max(Sigma_t), t = 0..horizon
  std::optional<std::int64_t> t_fail;
  std::int64_t horizon = 0;
  double bound_cap = 0.0;
};

FeasibilityResult feasibility_check(const SystemModel& model, const CovMatrix& phi,
                                    const Schedule& sched,
                                    const FeasibilityConfig& config = {});

// The alternating schedule that keeps average cost optimal while its
// covariance diverges: sensor 2 on [t12^k, t21^k) of length k, sensor 1 on
// [t21^k, t12^{k+1}) of length k lambda^{2k}, starting at t12^1 = 0.
struct Example1Interval {
  int k;
  std::int64_t t12;       // start of the sensor-2 interval
  std::int64_t t21;       // start of the sensor-1 interval
  std::int64_t t12_next;  // end of the sensor-1 interval
};

struct Example1Construction {
  Schedule schedule;
  std::vector<Example1Interval> intervals;  // k = 1..k_max

  std::int64_t horizon() const { return intervals.back().t12_next; }
};

// Throws BudgetError("horizon budget exceeded") when t12^{k_max+1} exceeds
// `step_budget`.
Example1Construction example1_schedule(int lambda, int k_max,
                                       std::int64_t step_budget = 10'000'000);

// A = diag{lambda, 0}, W = diag{c, c}, C_1 = [1 0], C_2 = [0 1], V_i = d.
SystemModel example1_model(double lambda, double c, double d);

// Equilibrium of the scalar Riccati equation for state 1 under sensor 1.
double example1_phistar(double lambda, double c, double d);

}  // namespace sensched

#endif  // SENSCHED_SCHEDULE_H_

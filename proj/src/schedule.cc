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

#include "sensched/schedule.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "sensched/errors.h"

namespace sensched {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Running totals J_1..J_T of the traces.
std::vector<double> running_totals(const std::vector<double>& traces) {
  std::vector<double> totals(traces.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    acc += traces[i];
    totals[i] = acc;
  }
  return totals;
}

struct WindowStats {
  double max;
  double min;
};

// Post-burn-in averages over N in [begin, end] (1-based N).
WindowStats window_stats(const std::vector<double>& totals, std::int64_t burn_in,
                         std::int64_t begin, std::int64_t end) {
  const double base = burn_in > 0 ? totals[static_cast<std::size_t>(burn_in - 1)] : 0.0;
  WindowStats s{-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
  for (std::int64_t N = begin; N <= end; ++N) {
    const double avg =
        (totals[static_cast<std::size_t>(N - 1)] - base) / static_cast<double>(N - burn_in);
    s.max = std::max(s.max, avg);
    s.min = std::min(s.min, avg);
  }
  return s;
}

}  // namespace

Schedule Schedule::Finite(SensorWord word) {
  if (word.empty()) throw InputError("finite schedule must be non-empty");
  Schedule s;
  s.kind_ = Kind::kFinite;
  s.word_ = std::move(word);
  return s;
}

Schedule Schedule::Periodic(SensorWord word) {
  if (word.empty()) throw InputError("period word must be non-empty");
  Schedule s;
  s.kind_ = Kind::kPeriodic;
  s.word_ = std::move(word);
  return s;
}

Schedule Schedule::Generated(std::string rule_name, std::map<std::string, double> params,
                             Rule rule) {
  if (!rule) throw InputError("generated schedule needs a rule");
  Schedule s;
  s.kind_ = Kind::kGenerated;
  s.rule_name_ = std::move(rule_name);
  s.params_ = std::move(params);
  s.rule_ = std::move(rule);
  return s;
}

int Schedule::at(std::int64_t t) const {
  if (t < 0) throw InputError("schedule evaluated at negative time");
  switch (kind_) {
    case Kind::kFinite:
      if (t >= static_cast<std::int64_t>(word_.size())) {
        throw InputError("finite schedule of length " + std::to_string(word_.size()) +
                         " evaluated at t = " + std::to_string(t));
      }
      return word_[static_cast<std::size_t>(t)];
    case Kind::kPeriodic:
      return word_[static_cast<std::size_t>(t % static_cast<std::int64_t>(word_.size()))];
    case Kind::kGenerated:
      return rule_(t);
  }
  return 0;
}

SensorWord Schedule::prefix(std::int64_t length) const { return slice(0, length); }

SensorWord Schedule::slice(std::int64_t offset, std::int64_t length) const {
  if (length < 0) throw InputError("negative slice length");
  SensorWord out;
  out.reserve(static_cast<std::size_t>(length));
  for (std::int64_t t = offset; t < offset + length; ++t) out.push_back(at(t));
  return out;
}

SensorWord Schedule::canonical_word() const {
  if (kind_ == Kind::kPeriodic) return canonical_rotation(word_);
  return word_;
}

std::optional<std::int64_t> Schedule::length() const {
  if (kind_ == Kind::kFinite) return static_cast<std::int64_t>(word_.size());
  return std::nullopt;
}

void Schedule::check_indices(int num_sensors) const {
  for (int id : word_) {
    if (id < 1 || id > num_sensors) {
      throw InputError("schedule index " + std::to_string(id) + " outside 1.." +
                       std::to_string(num_sensors));
    }
  }
}

SensorWord canonical_rotation(const SensorWord& word) {
  const std::size_t n = word.size();
  if (n < 2) return word;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const int a = word[(i + k) % n];
    const int b = word[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  const std::size_t start = std::min(i, j);
  SensorWord out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = word[(start + t) % n];
  return out;
}

bool is_lyndon(const SensorWord& word) {
  const std::size_t n = word.size();
  if (n == 0) return false;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t t = 0; t < n; ++t) {
      const int a = word[t];
      const int b = word[(t + r) % n];
      if (a < b) break;
      if (a > b || t + 1 == n) return false;  // rotation smaller or equal
    }
  }
  return true;
}

std::string word_to_string(const SensorWord& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(word[i]);
  }
  return out;
}

Schedule pseudo_random_schedule(std::uint64_t seed, int num_sensors) {
  if (num_sensors < 1) throw InputError("pseudo_random needs at least one sensor");
  const auto m = static_cast<std::uint64_t>(num_sensors);
  return Schedule::Generated(
      "pseudo_random",
      {{"seed", static_cast<double>(seed)}, {"M", static_cast<double>(num_sensors)}},
      [seed, m](std::int64_t t) {
        const std::uint64_t h =
            splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(t));
        return static_cast<int>(h % m) + 1;
      });
}

double total_cost(const SystemModel& model, const CovMatrix& phi, const Schedule& sched,
                  std::int64_t horizon) {
  if (horizon < 1) throw InputError("horizon must be at least 1");
  const Trajectory traj = propagate(model, phi, sched.prefix(horizon));
  double total = 0.0;
  for (double tr : traj.traces) total += tr;
  return total;
}

double avg_cost(const SystemModel& model, const CovMatrix& phi, const Schedule& sched,
                std::int64_t horizon) {
  return total_cost(model, phi, sched, horizon) / static_cast<double>(horizon);
}

CostSeries limsup_cost(const SystemModel& model, const CovMatrix& phi,
                       const Schedule& sched, const LimsupConfig& config) {
  if (config.burn_in < 0 || config.burn_in >= config.horizon) {
    throw InputError("limsup_cost needs 0 <= burn_in < horizon");
  }
  if (config.window < 1) throw InputError("limsup_cost needs window >= 1");

  const std::int64_t T = config.horizon;
  const Trajectory traj = propagate(model, phi, sched.prefix(2 * T));
  const std::vector<double> totals = running_totals(traj.traces);

  CostSeries series;
  series.totals.assign(totals.begin(), totals.begin() + T);
  series.averages.resize(static_cast<std::size_t>(T));
  for (std::int64_t N = 1; N <= T; ++N) {
    series.averages[static_cast<std::size_t>(N - 1)] =
        series.totals[static_cast<std::size_t>(N - 1)] / static_cast<double>(N);
  }
  series.burn_in = config.burn_in;
  series.window_begin = std::max(config.burn_in + 1, T - config.window);
  series.window_end = T;

  const WindowStats first = window_stats(totals, config.burn_in, series.window_begin, T);
  const WindowStats doubled = window_stats(
      totals, config.burn_in, std::max(config.burn_in + 1, 2 * T - config.window), 2 * T);
  series.limsup_estimate = first.max;
  series.liminf_estimate = first.min;
  series.doubled_limsup_estimate = doubled.max;
  series.converged = (first.max - first.min) < config.conv_tol &&
                     std::abs(doubled.max - first.max) < config.conv_tol;
  return series;
}

FeasibilityResult feasibility_check(const SystemModel& model, const CovMatrix& phi,
                                    const Schedule& sched,
                                    const FeasibilityConfig& config) {
  if (config.max_steps < 1) throw InputError("feasibility_check needs max_steps >= 1");
  FeasibilityResult result;
  result.bound_cap = config.bound_cap.value_or(1e8 * model.proc_noise().trace());
  result.horizon = config.max_steps;
  result.beta_observed = phi.lambda_max();
  if (phi.lambda_max() > result.bound_cap) {
    result.t_fail = 0;
    return result;
  }
  CovMatrix current = phi;
  for (std::int64_t t = 0; t < config.max_steps; ++t) {
    try {
      current = riccati_map(model, sched.at(t), current);
    } catch (const NumericalError&) {
      result.t_fail = t + 1;
      return result;
    }
    result.beta_observed = std::max(result.beta_observed, current.lambda_max());
    if (current.lambda_max() > result.bound_cap) {
      result.t_fail = t + 1;
      return result;
    }
  }
  result.feasible = true;
  return result;
}

Example1Construction example1_schedule(int lambda, int k_max, std::int64_t step_budget) {
  if (lambda < 2) throw InputError("example1_schedule needs lambda >= 2");
  if (k_max < 1) throw InputError("example1_schedule needs k_max >= 1");

  const auto lam2 = static_cast<std::int64_t>(lambda) * lambda;
  std::vector<Example1Interval> intervals;
  std::int64_t t12 = 0;
  std::int64_t power = 1;  // lambda^{2k}
  for (int k = 1; k <= k_max; ++k) {
    if (power > step_budget / lam2) throw BudgetError("horizon budget exceeded");
    power *= lam2;
    const std::int64_t t21 = t12 + k;
    const std::int64_t len1 = static_cast<std::int64_t>(k) * power;
    if (len1 > step_budget || t21 > step_budget - len1) {
      throw BudgetError("horizon budget exceeded");
    }
    intervals.push_back({k, t12, t21, t21 + len1});
    t12 = t21 + len1;
  }

  Schedule::Rule rule = [lam2](std::int64_t t) {
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    std::int64_t start = 0;
    std::int64_t power = 1;
    for (std::int64_t k = 1;; ++k) {
      const std::int64_t t21 = start + k;
      if (t < t21) return 2;
      if (power > kMax / lam2) return 1;
      power *= lam2;
      if (power > (kMax - t21) / k) return 1;
      const std::int64_t next = t21 + k * power;
      if (t < next) return 1;
      start = next;
    }
  };
  return {Schedule::Generated("example1",
                              {{"lambda", static_cast<double>(lambda)},
                               {"k_max", static_cast<double>(k_max)}},
                              std::move(rule)),
          std::move(intervals)};
}

SystemModel example1_model(double lambda, double c, double d) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = lambda;
  Eigen::MatrixXd C1(1, 2), C2(1, 2);
  C1 << 1.0, 0.0;
  C2 << 0.0, 1.0;
  const CovMatrix V(Eigen::MatrixXd::Constant(1, 1, d));
  return SystemModel(A, CovMatrix(c * Eigen::MatrixXd::Identity(2, 2)),
                     {SensorModel{C1, V}, SensorModel{C2, V}});
}

double example1_phistar(double lambda, double c, double d) {
  if (!(c > 0.0) || !(d > 0.0) || !(lambda > 1.0)) {
    throw InputError("example1_phistar needs c > 0, d > 0, lambda > 1");
  }
  const double b = d - c - lambda * lambda * d;
  return (std::sqrt(b * b + 4.0 * c * d) - b) / 2.0;
}

}  // namespace sensched

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

#ifndef SENSCHED_SEARCH_H_
#define SENSCHED_SEARCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sensched/model.h"
#include "sensched/periodic.h"
#include "sensched/schedule.h"

namespace sensched {

struct SearchConfig {
  std::int64_t budget = 1'000'000;  // cap on M^L
  bool prune = true;
  int lookahead = 4;                // depth of the dominance frontier
  FixedPointConfig fixed_point;
};

struct PeriodBest {
  SensorWord word;
  double cost = 0.0;
};

struct SearchResult {
  SensorWord best_word;  // canonical rotation
  double best_cost = 0.0;
  std::int64_t explored = 0;            // candidates evaluated
  std::int64_t pruned = 0;              // candidates cut by the lower bound
  std::int64_t dominated_prefixes = 0;  // frontier states dropped as dominated
  std::int64_t infeasible = 0;
  std::vector<SensorWord> infeasible_words;
  std::map<int, PeriodBest> per_period_best;  // over evaluated candidates

  Schedule best_schedule() const { return Schedule::Periodic(best_word); }
};

// Evaluates every Lyndon word (primitive, minimal rotation) of length <= L
// in lexicographic order by its N-cycle cost.
//
// Pruning is sound by monotonicity of the Riccati maps. Every cycle point
// dominates the process noise W, so along a candidate's prefix p the cycle
// traces are at least those of Sigma_j^p(W), and every cycle point has trace
// at least m_H, the smallest trace reachable from W in H = lookahead steps.
// m_H is computed on a frontier that drops equal-depth states dominating
// another state (lambda_min(Q_a - Q_b) >= -1e-12). A prefix whose resulting
// lower bound exceeds the incumbent cost by more than 1e-9 (1 + cost) is cut.
//
// Throws BudgetError when M^L exceeds the budget and FeasibilityError when
// no candidate converges.
SearchResult enumerate_periodic(const SystemModel& model, int max_period,
                                const SearchConfig& config = {});

struct GreedyResult {
  Schedule schedule;
  double avg_cost;
};

// Myopic baseline: each step picks argmin_i tr(rho_i(Sigma_t)), ties to the
// smallest index.
GreedyResult greedy_schedule(const SystemModel& model, const CovMatrix& phi,
                             std::int64_t horizon);

struct OracleResult {
  SensorWord word;
  double avg_cost;
};

// Exact minimizer of J_N / N over all M^N words; ties go to the
// lexicographically smallest word.
OracleResult brute_force_oracle(const SystemModel& model, const CovMatrix& phi, int horizon,
                                std::int64_t budget = 1'000'000);

struct ApproxConfig {
  std::optional<CovMatrix> phi0;   // default: process noise covariance
  std::optional<double> radius;    // default: 1e-3 (1 + |phi_hat|)
  std::int64_t t_sim = 200;
  std::int64_t grid_start = 64;
  std::int64_t grid_budget = 1 << 16;
  std::int64_t scan_budget = 100'000;
  FeasibilityConfig feasibility;
  LimsupConfig target;
  FixedPointConfig fixed_point;
};

struct ApproxResult {
  SensorWord word;           // one period of the constructed schedule
  double cycle_cost = 0.0;
  double target_cost = 0.0;  // exact cycle cost for periodic input, else estimate
  bool target_exact = false;
  double gap = 0.0;
  double radius = 0.0;
  std::int64_t l0 = 0;       // merge time of trajectories started in E
  std::int64_t l = 0;        // recurrence length of the return segment
  std::int64_t n_k = 0;      // length of the averaging segment

  Schedule schedule() const { return Schedule::Periodic(word); }
};

// Builds a periodic schedule whose cost is within delta of the asymptotic
// cost of a feasible schedule.
//
// With phi_hat = Sigma_{t_sim}(phi0) and sigma' the schedule shifted by t_sim:
//  (i) l0 is the first step where trajectories from 0 and beta_hat I (which
//      sandwich every start in E = {phi <= beta_hat I}) are within r/2, and
//      l >= l0 is the first return |Sigma_l^{sigma'}(phi_hat) - phi_hat| <= r/2;
//  (ii) N_k walks a doubling grid from grid_start; at level g it is the first
//      step in [g, 2g) where the traces of sigma'[0, N_k) and sigma'[0, l)
//      from phi_hat average to within delta/3 of the target, moved to a
//      return time with that property when one exists;
//  (iii) the period word is sigma'[0, N_k) followed by sigma'[0, l).
//
// Throws FeasibilityError("feasibility check failed ...") when the input
// diverges, ConvergenceError("recurrence not detected; increase T_sim or r")
// when a scan runs out, and ApproximationError with the best gap when the
// grid is exhausted.
ApproxResult universal_approx_construct(const SystemModel& model, const Schedule& sched,
                                        double delta, const ApproxConfig& config = {});

}  // namespace sensched

#endif  // SENSCHED_SEARCH_H_

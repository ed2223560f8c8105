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

#include "sensched/search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "sensched/errors.h"

namespace sensched {
namespace {

constexpr double kDominanceTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double cost, double incumbent) {
  if (!std::isfinite(incumbent)) return cost < incumbent;
  return cost < incumbent - 1e-12 * (1.0 + std::abs(incumbent));
}

void check_budget(int num_sensors, int depth, std::int64_t budget, const char* what) {
  const double count = std::pow(static_cast<double>(num_sensors), depth);
  if (count > static_cast<double>(budget)) {
    std::ostringstream os;
    os << what << " needs M^" << depth << " = " << count
       << " candidates, budget is " << budget;
    throw BudgetError(os.str());
  }
}

bool dominates(const CovMatrix& a, const CovMatrix& b) {
  return lambda_min_symmetric(a.matrix() - b.matrix()) >= -kDominanceTol;
}

// Smallest trace reachable from W in `depth` steps, over a frontier with
// dominated states removed. Dominance is inherited by all continuations, so
// the minimum is exact.
double frontier_floor(const SystemModel& model, int depth, std::int64_t& dominated) {
  std::vector<CovMatrix> frontier{model.proc_noise()};
  for (int j = 0; j < depth; ++j) {
    std::vector<CovMatrix> kept;
    for (const CovMatrix& state : frontier) {
      for (int id = 1; id <= model.num_sensors(); ++id) {
        CovMatrix child = riccati_map(model, id, state);
        const bool is_dominated = std::any_of(
            kept.begin(), kept.end(),
            [&child](const CovMatrix& k) { return dominates(child, k); });
        if (is_dominated) {
          ++dominated;
          continue;
        }
        const auto erased = std::erase_if(
            kept, [&child](const CovMatrix& k) { return dominates(k, child); });
        dominated += static_cast<std::int64_t>(erased);
        kept.push_back(std::move(child));
      }
    }
    frontier = std::move(kept);
  }
  double floor = kInf;
  for (const CovMatrix& s : frontier) floor = std::min(floor, s.trace());
  return floor;
}

class PeriodicSearch {
 public:
  PeriodicSearch(const SystemModel& model, int max_period, const SearchConfig& config)
      : model_(model), max_period_(max_period), config_(config) {}

  SearchResult run() {
    if (config_.prune) {
      floor_ = frontier_floor(model_, std::min(config_.lookahead, max_period_),
                              result_.dominated_prefixes);
    }
    result_.best_cost = kInf;
    SensorWord prefix;
    visit(prefix, model_.proc_noise(), 0.0);
    if (result_.best_word.empty()) {
      throw FeasibilityError("feasibility check failed: no periodic word of period <= " + std::to_string(max_period_) +
                             " converged");
    }
    return result_;
  }

 private:
  // `state` is Sigma_d^prefix(W); `bound_sum` the per-position lower bounds.
  void visit(SensorWord& prefix, const CovMatrix& state, double bound_sum) {
    const int d = static_cast<int>(prefix.size());
    if (d > 0) {
      if (config_.prune && subtree_bound(d, bound_sum) >
                               result_.best_cost + 1e-9 * (1.0 + std::abs(result_.best_cost))) {
        result_.pruned += count_candidates(prefix);
        return;
      }
      if (is_lyndon(prefix)) evaluate(prefix);
    }
    if (d == max_period_) return;

    for (int id = 1; id <= model_.num_sensors(); ++id) {
      prefix.push_back(id);
      if (config_.prune) {
        double child_sum = kInf;
        CovMatrix child = state;
        try {
          child = riccati_map(model_, id, state);
          child_sum = bound_sum + std::max(child.trace(), floor_);
        } catch (const NumericalError&) {
        }
        visit(prefix, child, child_sum);
      } else {
        visit(prefix, state, 0.0);
      }
      prefix.pop_back();
    }
  }

  double subtree_bound(int d, double bound_sum) const {
    if (!std::isfinite(bound_sum)) return kInf;
    double lb = kInf;
    for (int N = d; N <= max_period_; ++N) {
      lb = std::min(lb, (bound_sum + (N - d) * floor_) / N);
    }
    return lb;
  }

  // Lyndon words of length <= L having `prefix` as a prefix.
  std::int64_t count_candidates(SensorWord& prefix) const {
    std::int64_t count = is_lyndon(prefix) ? 1 : 0;
    if (static_cast<int>(prefix.size()) == max_period_) return count;
    for (int id = 1; id <= model_.num_sensors(); ++id) {
      prefix.push_back(id);
      count += count_candidates(prefix);
      prefix.pop_back();
    }
    return count;
  }

  void evaluate(const SensorWord& word) {
    ++result_.explored;
    double cost = kInf;
    try {
      cost = n_cycle(model_, word, config_.fixed_point).cycle_avg_cost;
    } catch (const ConvergenceError&) {
      ++result_.infeasible;
      result_.infeasible_words.push_back(word);
      return;
    }
    const int period = static_cast<int>(word.size());
    auto it = result_.per_period_best.find(period);
    if (it == result_.per_period_best.end()) {
      result_.per_period_best.emplace(period, PeriodBest{word, cost});
    } else if (better(cost, it->second.cost)) {
      it->second = {word, cost};
    }
    if (better(cost, result_.best_cost)) {
      result_.best_cost = cost;
      result_.best_word = word;
    }
  }

  const SystemModel& model_;
  int max_period_;
  SearchConfig config_;
  double floor_ = 0.0;
  SearchResult result_;
};

}  // namespace

SearchResult enumerate_periodic(const SystemModel& model, int max_period,
                                const SearchConfig& config) {
  if (max_period < 1) throw InputError("max_period must be at least 1");
  if (config.lookahead < 0) throw InputError("lookahead must be nonnegative");
  check_budget(model.num_sensors(), max_period, config.budget, "enumerate_periodic");
  return PeriodicSearch(model, max_period, config).run();
}

GreedyResult greedy_schedule(const SystemModel& model, const CovMatrix& phi,
                             std::int64_t horizon) {
  if (horizon < 1) throw InputError("greedy horizon must be at least 1");
  SensorWord word;
  word.reserve(static_cast<std::size_t>(horizon));
  CovMatrix current = phi;
  double total = 0.0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    int best_id = 1;
    CovMatrix best = riccati_map(model, 1, current);
    for (int id = 2; id <= model.num_sensors(); ++id) {
      CovMatrix candidate = riccati_map(model, id, current);
      if (candidate.trace() < best.trace()) {
        best = std::move(candidate);
        best_id = id;
      }
    }
    word.push_back(best_id);
    total += best.trace();
    current = std::move(best);
  }
  return {Schedule::Finite(std::move(word)), total / static_cast<double>(horizon)};
}

namespace {

void oracle_visit(const SystemModel& model, int horizon, SensorWord& prefix,
                  const CovMatrix& state, double total, OracleResult& best) {
  if (static_cast<int>(prefix.size()) == horizon) {
    const double avg = total / horizon;
    if (best.word.empty() || better(avg, best.avg_cost)) best = {prefix, avg};
    return;
  }
  for (int id = 1; id <= model.num_sensors(); ++id) {
    const CovMatrix next = riccati_map(model, id, state);
    prefix.push_back(id);
    oracle_visit(model, horizon, prefix, next, total + next.trace(), best);
    prefix.pop_back();
  }
}

}  // namespace

OracleResult brute_force_oracle(const SystemModel& model, const CovMatrix& phi, int horizon,
                                std::int64_t budget) {
  if (horizon < 1) throw InputError("oracle horizon must be at least 1");
  check_budget(model.num_sensors(), horizon, budget, "brute_force_oracle");
  OracleResult best{{}, kInf};
  SensorWord prefix;
  oracle_visit(model, horizon, prefix, phi, 0.0, best);
  return best;
}

namespace {

// Lazily extended trajectory of the shifted schedule from phi_hat, keeping
// traces and the distance of each state to phi_hat.
class ShiftedRun {
 public:
  ShiftedRun(const SystemModel& model, const Schedule& sched, std::int64_t offset,
             CovMatrix start)
      : model_(model), sched_(sched), offset_(offset), start_(start), state_(std::move(start)) {}

  void extend_to(std::int64_t steps) {
    while (static_cast<std::int64_t>(totals_.size()) < steps) {
      const auto t = static_cast<std::int64_t>(totals_.size());
      const int id = sched_.at(offset_ + t);
      word_.push_back(id);
      state_ = riccati_map(model_, id, state_);
      totals_.push_back((totals_.empty() ? 0.0 : totals_.back()) + state_.trace());
      distance_.push_back(symmetric_norm(state_.matrix() - start_.matrix()));
    }
  }

  // Distance of Sigma_steps to phi_hat (steps >= 1).
  double distance(std::int64_t steps) {
    extend_to(steps);
    return distance_[static_cast<std::size_t>(steps - 1)];
  }

  double total(std::int64_t steps) {
    extend_to(steps);
    return totals_[static_cast<std::size_t>(steps - 1)];
  }

  SensorWord word(std::int64_t steps) {
    extend_to(steps);
    return SensorWord(word_.begin(), word_.begin() + steps);
  }

 private:
  const SystemModel& model_;
  const Schedule& sched_;
  std::int64_t offset_;
  CovMatrix start_;
  CovMatrix state_;
  SensorWord word_;
  std::vector<double> totals_;  // running sums of traces
  std::vector<double> distance_;
};

}  // namespace

ApproxResult universal_approx_construct(const SystemModel& model, const Schedule& sched,
                                        double delta, const ApproxConfig& config) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (config.t_sim < 0 || config.grid_start < 1 || config.scan_budget < 1) {
    throw InputError("invalid approximation config");
  }
  const CovMatrix phi0 = config.phi0.value_or(model.proc_noise());

  const FeasibilityResult feas = feasibility_check(model, phi0, sched, config.feasibility);
  if (!feas.feasible) {
    throw FeasibilityError("feasibility check failed: covariance exceeded " +
                           std::to_string(feas.bound_cap) + " at t = " +
                           std::to_string(feas.t_fail.value_or(-1)));
  }

  ApproxResult result;
  if (sched.is_periodic()) {
    result.target_cost = n_cycle(model, sched.word(), config.fixed_point).cycle_avg_cost;
    result.target_exact = true;
  } else {
    result.target_cost = limsup_cost(model, phi0, sched, config.target).limsup_estimate;
  }

  CovMatrix phi_hat = phi0;
  for (std::int64_t t = 0; t < config.t_sim; ++t) {
    phi_hat = riccati_map(model, sched.at(t), phi_hat);
  }
  const double r = config.radius.value_or(1e-3 * (1.0 + phi_hat.lambda_max()));
  if (!(r > 0.0)) throw InputError("radius must be positive");
  result.radius = r;
  const int n = model.state_dim();

  // (i) merge time for E = {phi <= beta_hat I}; monotonicity sandwiches every
  // trajectory from E between those from 0 and beta_hat I.
  const double beta_hat = 2.0 * std::max(feas.beta_observed, phi_hat.lambda_max());
  CovMatrix lower = CovMatrix::Zero(n);
  CovMatrix upper = CovMatrix::Identity(n, beta_hat);
  for (std::int64_t t = 1;; ++t) {
    if (t > config.scan_budget) {
      throw ConvergenceError("recurrence not detected; increase T_sim or r "
                             "(trajectories from E did not merge)",
                             {});
    }
    const int id = sched.at(config.t_sim + t - 1);
    lower = riccati_map(model, id, lower);
    upper = riccati_map(model, id, upper);
    if (symmetric_norm(upper.matrix() - lower.matrix()) <= r / 2.0) {
      result.l0 = t;
      break;
    }
  }

  ShiftedRun run(model, sched, config.t_sim, phi_hat);
  for (std::int64_t l = result.l0;; ++l) {
    if (l > result.l0 + config.scan_budget) {
      throw ConvergenceError("recurrence not detected; increase T_sim or r", {});
    }
    if (run.distance(l) <= r / 2.0) {
      result.l = l;
      break;
    }
  }
  const SensorWord return_segment = run.word(result.l);
  const double return_total = run.total(result.l);

  // (ii)-(iii)
  double best_gap = kInf;
  for (std::int64_t g = config.grid_start; g <= config.grid_budget; g *= 2) {
    // Within [g, 2g), take the first return time whose predicted period
    // average (segment plus return traces along sigma') is within delta / 3
    // of the target, otherwise the step with the closest prediction.
    std::int64_t n_k = 0;
    double closest = delta / 3.0;
    for (std::int64_t N = g; N < 2 * g; ++N) {
      const double predicted = (run.total(N) + return_total) / static_cast<double>(N + result.l);
      const double off = std::abs(predicted - result.target_cost);
      if (off >= delta / 3.0) continue;
      if (run.distance(N) <= r / 2.0) {
        n_k = N;
        break;
      }
      if (off < closest) {
        closest = off;
        n_k = N;
      }
    }
    if (n_k == 0) continue;

    SensorWord word = run.word(n_k);
    word.insert(word.end(), return_segment.begin(), return_segment.end());
    double cost = kInf;
    try {
      cost = n_cycle(model, word, config.fixed_point).cycle_avg_cost;
    } catch (const ConvergenceError&) {
      continue;
    }
    const double gap = std::abs(cost - result.target_cost);
    best_gap = std::min(best_gap, gap);
    if (gap < delta) {
      result.n_k = n_k;
      result.cycle_cost = cost;
      result.gap = gap;
      result.word = std::move(word);
      return result;
    }
  }
  std::ostringstream os;
  os << "approximation grid exhausted: best gap " << best_gap << " >= delta " << delta;
  throw ApproximationError(os.str(), best_gap);
}

}  // namespace sensched

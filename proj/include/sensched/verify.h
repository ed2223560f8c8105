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

#ifndef SENSCHED_VERIFY_H_
#define SENSCHED_VERIFY_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sensched/model.h"
#include "sensched/schedule.h"
#include "sensched/search.h"

namespace sensched {

// Result of one named structural check. `margin` is the signed distance to
// the nearest violated threshold, so pass == (margin >= 0).
struct CheckReport {
  std::string name;
  std::string instance;
  bool pass = false;
  double margin = 0.0;
  std::vector<std::pair<std::string, double>> details;
  std::vector<std::string> notes;

  void set_margin(double m) {
    margin = m;
    pass = m >= 0.0;
  }
  std::string to_text() const;
};

// Monotonicity and concavity margins of one Riccati-map instance:
// lambda_min(rho(Q2) - rho(Q1)) and
// lambda_min(rho(c Q1 + (1 - c) Q2) - c rho(Q1) - (1 - c) rho(Q2)).
struct Lemma1Margins {
  double monotone;
  double concave;
};
Lemma1Margins lemma1_margins(const SystemModel& model, int sensor, const CovMatrix& Q1,
                             const CovMatrix& Q2, double c);

// Random instances with Q2 = Q1 + PSD; tolerance -1e-9.
CheckReport check_lemma1(std::uint64_t seed, int count = 1000);

// min_t lambda_min(Sigma_t(phi) + eps g_t - Sigma_t(phi + eps I)).
double first_order_gap(const SystemModel& model, const CovMatrix& phi,
                       const SensorWord& sensors, double eps);

// Trace bound, first-order bound (slack -1e-7) and central finite-difference
// agreement of the derivative (1e-5 relative, t <= 20) on random systems.
CheckReport check_prop1(std::uint64_t seed, int count = 50, int horizon = 50);

// Trajectory merging for one periodic word and pair of initial covariances:
// terminal ratio |Sigma_T(phi1) - Sigma_T(phi2)| / |phi1 - phi2| < 1e-8,
// negative log-slope over [T/2, T] above the round-off floor, and limsup
// estimates that agree to 1e-6.
CheckReport check_theorem1_instance(const SystemModel& model, const SensorWord& word,
                                    const CovMatrix& phi1, const CovMatrix& phi2,
                                    int horizon);
CheckReport check_theorem1(std::uint64_t seed, int count = 50, int horizon = 500);

// Divergence of Sigma_{t21^k - 1}(1,1) past 1e6 tr(W), monotone approach of
// the union-interval average to phi* + c for k in 3..k_max with a final gap
// below 0.05, and the exclusive-sensor-1 cost within 1e-4 of phi* + c.
CheckReport check_example1(int lambda = 2, double c = 1.0, double d = 1.0, int k_max = 6);

// Empirical covariance of e(t|t-1) over independent simulated runs against
// the Riccati prediction, tolerance max(0.05, 5 / sqrt(n_runs)) relative in
// spectral norm. Run r draws from an mt19937_64 seeded with
// splitmix64(seed + r); runs are summed in fixed chunks of 1024 so threaded
// and serial execution agree bit for bit.
CheckReport monte_carlo_consistency(const SystemModel& model, const Schedule& sched,
                                    const CovMatrix& phi, int horizon, int n_runs,
                                    std::uint64_t seed,
                                    std::vector<int> checkpoints = {1, 10, 50});

// Spread of the post-burn-in running averages of the best periodic word over
// N in [T/2, T] must be below 1e-5.
CheckReport check_corollary3(const SystemModel& model, const SearchResult& result,
                             int horizon = 2000);

// Suite names: lemma1, prop1, theorem1, example1, monte_carlo, corollary3, all.
// Throws InputError for an unknown name.
std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed);
const std::vector<std::string>& suite_names();

}  // namespace sensched

#endif  // SENSCHED_VERIFY_H_

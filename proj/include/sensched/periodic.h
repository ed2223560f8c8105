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

#ifndef SENSCHED_PERIODIC_H_
#define SENSCHED_PERIODIC_H_

#include <optional>
#include <vector>

#include "sensched/model.h"
#include "sensched/riccati.h"
#include "sensched/schedule.h"

namespace sensched {

struct FixedPointConfig {
  double fp_tol = 1e-10;
  int max_iters = 10000;
  std::optional<CovMatrix> init;  // defaults to the process noise covariance
};

struct FixedPointResult {
  CovMatrix P;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residuals;  // relative step sizes, one per iteration
};

// Iterates the one-period composite map phi <- Sigma_N(phi) until
// |phi_{j+1} - phi_j| <= fp_tol (1 + |phi_j|) in spectral norm.
//
// Throws ConvergenceError("no convergence: ...") with the residual history
// when max_iters is reached or the iterates overflow.
FixedPointResult fixed_point(const SystemModel& model, const SensorWord& word,
                             const FixedPointConfig& config = {});
FixedPointResult fixed_point(const SystemModel& model, const Schedule& sched,
                             const FixedPointConfig& config = {});

// The periodic orbit (phi_0, ..., phi_{N-1}) of a period-N word with
// rho_{w(t)}(phi_t) = phi_{t+1 mod N}.
struct NCycle {
  SensorWord word;
  std::vector<CovMatrix> points;
  double cycle_avg_cost = 0.0;     // (1/N) sum_{t=1}^{N} tr(Sigma_t(P))
  double contraction_factor = 0.0; // per-period ratio of late fixed-point residuals
  double closure_residual = 0.0;   // |rho_{w(N-1)}(phi_{N-1}) - phi_0|
  int iterations = 0;

  int period() const { return static_cast<int>(word.size()); }
};

NCycle n_cycle(const SystemModel& model, const SensorWord& word,
               const FixedPointConfig& config = {});

// Local certificate only: rho_est estimates the spectral radius of the
// one-period linearization D -> Phi D Phi^T along the cycle, with
// Phi = prod_t (A - K_t C_{w(t)}), by power iteration on symmetric directions.
struct StabilityCertificate {
  double rho_est = 0.0;
  bool stable = false;
  int iterations = 0;
};

StabilityCertificate stability_certificate(const SystemModel& model, const NCycle& cycle);

}  // namespace sensched

#endif  // SENSCHED_PERIODIC_H_

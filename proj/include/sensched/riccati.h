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

#ifndef SENSCHED_RICCATI_H_
#define SENSCHED_RICCATI_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sensched/model.h"

namespace sensched {

using SensorWord = std::vector<int>;

// Prediction-error covariances Sigma_1..Sigma_T produced from `init` by the
// sensor sequence in `sensors`; covs[t] = rho_{sensors[t]}(covs[t-1]).
struct Trajectory {
  CovMatrix init;
  SensorWord sensors;
  std::vector<CovMatrix> covs;
  std::vector<double> traces;

  std::size_t size() const { return covs.size(); }
};

// One Riccati step together with the gain that produced it.
struct RiccatiStep {
  CovMatrix next;
  Eigen::MatrixXd gain;  // n x p
};

// rho_i(Q) = W + A Q A^T - A Q C^T (C Q C^T + V)^{-1} C Q A^T.
//
// The innovation covariance is factored by Cholesky and never inverted.
// Throws NumericalError("innovation covariance ill-conditioned") when the
// factorization fails or its reciprocal condition estimate is below 1e-14.
RiccatiStep riccati_step(const SystemModel& model, int sensor, const CovMatrix& Q);
CovMatrix riccati_map(const SystemModel& model, int sensor, const CovMatrix& Q);

// K = A Q C^T (C Q C^T + V)^{-1}.
Eigen::MatrixXd kalman_gain(const SystemModel& model, int sensor, const CovMatrix& Q);

// Sigma_{t|t} = Q - Q C^T (C Q C^T + V)^{-1} C Q, so that
// rho_i(Q) = W + A * filtered_covariance(Q) * A^T.
CovMatrix filtered_covariance(const SystemModel& model, int sensor, const CovMatrix& Q);

Trajectory propagate(const SystemModel& model, const CovMatrix& phi,
                     const SensorWord& sensors);

// Frechet derivative of the t-step composite map at phi along `direction`,
// for t = 1..T. Each step pushes the direction through D -> F D F^T with
// F = A - K C evaluated at the current covariance. Defaults to I_n.
std::vector<Eigen::MatrixXd> directional_derivative(
    const SystemModel& model, const CovMatrix& phi, const SensorWord& sensors,
    const std::optional<Eigen::MatrixXd>& direction = std::nullopt);

struct BoundConstants {
  double beta;
  double alpha;
  double eta;
};

// alpha = lw / (|A|^2 beta^2 + lw beta), eta = 1 / (1 + alpha lw).
BoundConstants prop1_constants(const SystemModel& model, double beta);

// Trace-decay check of the directional derivative against n beta eta^t / lw
// on the tested horizon [1, T] only; boundedness beyond T is not certified.
struct TraceBoundReport {
  BoundConstants constants;
  std::vector<double> derivative_trace;  // tr(g_t), t = 1..T
  std::vector<double> bound;             // n beta eta^t / lw
  std::vector<double> margin;            // bound - tr(g_t)
  double min_margin = 0.0;
  bool holds = false;                    // every margin >= -1e-9
};

// Throws InputError("beta is not a valid trajectory bound") when some
// Sigma_t, t = 0..T, has lambda_max above beta.
TraceBoundReport prop1_trace_bound(const SystemModel& model, const CovMatrix& phi,
                                   const SensorWord& sensors, double beta);

}  // namespace sensched

#endif  // SENSCHED_RICCATI_H_

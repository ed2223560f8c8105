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

#include "sensched/riccati.h"

#include <cmath>
#include <string>

#include "sensched/errors.h"

namespace sensched {
namespace {

constexpr double kMinInnovationRcond = 1e-14;
constexpr double kTraceBoundSlack = 1e-9;

const SensorModel& checked_sensor(const SystemModel& model, int sensor,
                                  const CovMatrix& Q) {
  const SensorModel& s = model.sensor(sensor);
  if (Q.dim() != model.state_dim()) {
    throw InputError("covariance dimension " + std::to_string(Q.dim()) +
                     " does not match n = " + std::to_string(model.state_dim()));
  }
  if (s.C.cols() != model.state_dim()) {
    throw InputError("sensor " + std::to_string(sensor) + " C has " +
                     std::to_string(s.C.cols()) + " columns, expected n");
  }
  return s;
}

// Solves S X = rhs for the innovation covariance S.
Eigen::MatrixXd innovation_solve(const Eigen::MatrixXd& S, const Eigen::MatrixXd& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinInnovationRcond)) {
    throw NumericalError("innovation covariance ill-conditioned");
  }
  return llt.solve(rhs);
}

}  // namespace

RiccatiStep riccati_step(const SystemModel& model, int sensor, const CovMatrix& Q) {
  const SensorModel& s = checked_sensor(model, sensor, Q);
  const Eigen::MatrixXd& A = model.A();
  const Eigen::MatrixXd& P = Q.matrix();

  const Eigen::MatrixXd CP = s.C * P;                      // p x n
  const Eigen::MatrixXd S = CP * s.C.transpose() + s.meas_noise.matrix();
  const Eigen::MatrixXd CPAt = CP * A.transpose();         // p x n
  const Eigen::MatrixXd gain_t = innovation_solve(S, CPAt);  // S^{-1} C P A^T

  Eigen::MatrixXd next = model.proc_noise().matrix() + A * P * A.transpose() -
                         CPAt.transpose() * gain_t;
  return {CovMatrix(next), gain_t.transpose()};
}

CovMatrix riccati_map(const SystemModel& model, int sensor, const CovMatrix& Q) {
  return riccati_step(model, sensor, Q).next;
}

Eigen::MatrixXd kalman_gain(const SystemModel& model, int sensor, const CovMatrix& Q) {
  return riccati_step(model, sensor, Q).gain;
}

CovMatrix filtered_covariance(const SystemModel& model, int sensor, const CovMatrix& Q) {
  const SensorModel& s = checked_sensor(model, sensor, Q);
  const Eigen::MatrixXd& P = Q.matrix();
  const Eigen::MatrixXd CP = s.C * P;
  const Eigen::MatrixXd S = CP * s.C.transpose() + s.meas_noise.matrix();
  return CovMatrix(P - CP.transpose() * innovation_solve(S, CP));
}

Trajectory propagate(const SystemModel& model, const CovMatrix& phi,
                     const SensorWord& sensors) {
  if (sensors.empty()) throw InputError("propagate needs a non-empty sensor sequence");
  Trajectory traj{phi, sensors, {}, {}};
  traj.covs.reserve(sensors.size());
  traj.traces.reserve(sensors.size());
  const CovMatrix* current = &phi;
  for (int id : sensors) {
    traj.covs.push_back(riccati_map(model, id, *current));
    current = &traj.covs.back();
    traj.traces.push_back(current->trace());
  }
  return traj;
}

std::vector<Eigen::MatrixXd> directional_derivative(
    const SystemModel& model, const CovMatrix& phi, const SensorWord& sensors,
    const std::optional<Eigen::MatrixXd>& direction) {
  const int n = model.state_dim();
  Eigen::MatrixXd g = direction.value_or(Eigen::MatrixXd::Identity(n, n));
  if (g.rows() != n || g.cols() != n) throw InputError("direction must be n x n");
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
    throw InputError("direction must be symmetric");
  }

  std::vector<Eigen::MatrixXd> out;
  out.reserve(sensors.size());
  CovMatrix current = phi;
  for (int id : sensors) {
    RiccatiStep step = riccati_step(model, id, current);
    const Eigen::MatrixXd F = model.A() - step.gain * model.sensor(id).C;
    g = F * g * F.transpose();
    g = 0.5 * (g + g.transpose());
    out.push_back(g);
    current = std::move(step.next);
  }
  return out;
}

BoundConstants prop1_constants(const SystemModel& model, double beta) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  const double lw = model.lambda_w_minus();
  if (!(lw > 0.0)) throw InputError("lambda_w_minus must be positive");
  const double a = model.a_norm();
  const double alpha = lw / (a * a * beta * beta + lw * beta);
  const double eta = 1.0 / (1.0 + alpha * lw);
  return {beta, alpha, eta};
}

TraceBoundReport prop1_trace_bound(const SystemModel& model, const CovMatrix& phi,
                                   const SensorWord& sensors, double beta) {
  TraceBoundReport report{prop1_constants(model, beta), {}, {}, {}, 0.0, false};
  const Trajectory traj = propagate(model, phi, sensors);
  if (phi.lambda_max() > beta) {
    throw InputError("beta is not a valid trajectory bound (t = 0)");
  }
  for (std::size_t t = 0; t < traj.size(); ++t) {
    if (traj.covs[t].lambda_max() > beta) {
      throw InputError("beta is not a valid trajectory bound (t = " +
                       std::to_string(t + 1) + ")");
    }
  }

  const std::vector<Eigen::MatrixXd> g = directional_derivative(model, phi, sensors);
  const double n = model.state_dim();
  const double lw = model.lambda_w_minus();
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < g.size(); ++t) {
    const double b =
        n * beta * std::pow(report.constants.eta, static_cast<double>(t + 1)) / lw;
    const double tr = g[t].trace();
    report.derivative_trace.push_back(tr);
    report.bound.push_back(b);
    report.margin.push_back(b - tr);
    report.min_margin = std::min(report.min_margin, b - tr);
  }
  report.holds = report.min_margin >= -kTraceBoundSlack;
  return report;
}

}  // namespace sensched

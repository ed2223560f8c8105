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

#include "sensched/model.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sensched/errors.h"

namespace sensched {
namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double psd_tolerance(double largest_abs_eigenvalue) {
  return 1e-10 * std::max(1.0, largest_abs_eigenvalue);
}

CovMatrix::CovMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InputError("covariance must be a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw NumericalError("non-finite input");

  m_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = psd_tolerance(ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -tol) {
    throw NumericalError("matrix is not positive semidefinite: lambda_min = " +
                         format_double(ev.minCoeff()));
  }
  if (ev.minCoeff() < 0.0) {
    const Eigen::VectorXd clamped = ev.cwiseMax(0.0);
    const Eigen::MatrixXd rebuilt =
        es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
    m_ = 0.5 * (rebuilt + rebuilt.transpose());
    lambda_min_ = 0.0;
    lambda_max_ = clamped.maxCoeff();
  } else {
    lambda_min_ = ev.minCoeff();
    lambda_max_ = ev.maxCoeff();
  }
}

CovMatrix CovMatrix::Zero(int n) { return CovMatrix(Eigen::MatrixXd::Zero(n, n)); }

CovMatrix CovMatrix::Identity(int n, double scale) {
  return CovMatrix(scale * Eigen::MatrixXd::Identity(n, n));
}

SystemModel::SystemModel(Eigen::MatrixXd A, CovMatrix proc_noise,
                         std::vector<SensorModel> sensors)
    : A_(std::move(A)),
      proc_noise_(std::move(proc_noise)),
      sensors_(std::move(sensors)),
      lambda_w_minus_(proc_noise_.lambda_min()),
      lambda_v_minus_(std::numeric_limits<double>::infinity()),
      a_norm_(spectral_norm(A_)) {
  for (const SensorModel& s : sensors_) {
    lambda_v_minus_ = std::min(lambda_v_minus_, s.meas_noise.lambda_min());
  }
}

const SensorModel& SystemModel::sensor(int id) const {
  if (id < 1 || id > num_sensors()) {
    throw InputError("sensor index " + std::to_string(id) + " outside 1.." +
                     std::to_string(num_sensors()));
  }
  return sensors_[static_cast<std::size_t>(id - 1)];
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok\n";
  std::string out;
  for (const Violation& v : violations) {
    out += "violation: " + v.invariant + " (" + v.detail + ")\n";
  }
  return out;
}

ValidationReport validate_system(const SystemModel& model) {
  ValidationReport report;
  auto add = [&report](std::string invariant, std::string detail) {
    report.violations.push_back({std::move(invariant), std::move(detail)});
  };

  const Eigen::Index n = model.A().rows();
  if (model.A().cols() != n) {
    add("A is square", "A is " + std::to_string(n) + "x" +
                           std::to_string(model.A().cols()));
  }
  if (model.proc_noise().dim() != n) {
    add("proc_noise dim = n", "proc_noise is " +
                                  std::to_string(model.proc_noise().dim()) +
                                  ", n = " + std::to_string(n));
  }
  if (!(model.lambda_w_minus() > 0.0)) {
    add("lambda_w_minus > 0",
        "lambda_w_minus = " + format_double(model.lambda_w_minus()));
  }
  if (model.num_sensors() < 1) {
    add("M >= 1", "M = 0");
  } else if (!(model.lambda_v_minus() > 0.0)) {
    add("lambda_v_minus > 0",
        "lambda_v_minus = " + format_double(model.lambda_v_minus()));
  }
  for (int i = 0; i < model.num_sensors(); ++i) {
    const SensorModel& s = model.sensors()[static_cast<std::size_t>(i)];
    const std::string tag = "sensor " + std::to_string(i + 1);
    if (s.C.cols() != n) {
      add("C columns = n", tag + ": C has " + std::to_string(s.C.cols()) +
                               " columns, n = " + std::to_string(n));
    }
    if (s.meas_noise.dim() != s.C.rows()) {
      add("meas_noise dim = C rows",
          tag + ": meas_noise is " + std::to_string(s.meas_noise.dim()) +
              ", C has " + std::to_string(s.C.rows()) + " rows");
    }
    if (!s.C.allFinite()) add("C finite", tag);
  }
  return report;
}

void require_valid(const SystemModel& model) {
  const ValidationReport report = validate_system(model);
  if (!report.ok()) throw InputError("invalid system model:\n" + report.to_string());
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NumericalError("non-finite input");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double symmetric_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return symmetric_eigenvalues(0.5 * (m + m.transpose())).cwiseAbs().maxCoeff();
}

double lambda_min_symmetric(const Eigen::MatrixXd& m) {
  return symmetric_eigenvalues(0.5 * (m + m.transpose())).minCoeff();
}

double lambda_max_symmetric(const Eigen::MatrixXd& m) {
  return symmetric_eigenvalues(0.5 * (m + m.transpose())).maxCoeff();
}

}  // namespace sensched

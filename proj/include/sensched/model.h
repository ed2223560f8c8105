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

#ifndef SENSCHED_MODEL_H_
#define SENSCHED_MODEL_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sensched {

// Symmetric positive-semidefinite n x n matrix.
//
// Construction symmetrizes the input as (Q + Q^T) / 2. Eigenvalues in
// [-psd_tol, 0) are clamped to zero, with psd_tol = 1e-10 * max(1, max|lambda|);
// anything more negative is rejected with NumericalError.
class CovMatrix {
 public:
  explicit CovMatrix(const Eigen::MatrixXd& m);

  static CovMatrix Zero(int n);
  static CovMatrix Identity(int n, double scale = 1.0);

  const Eigen::MatrixXd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace(); }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  bool operator==(const CovMatrix& other) const { return m_ == other.m_; }

 private:
  Eigen::MatrixXd m_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

double psd_tolerance(double largest_abs_eigenvalue);

struct SensorModel {
  Eigen::MatrixXd C;       // p x n
  CovMatrix meas_noise;    // p x p

  int output_dim() const { return static_cast<int>(C.rows()); }
};

// Plant x(t+1) = A x(t) + w(t) with M sensors y_i = C_i x + v_i.
//
// Construction never enforces the standing assumptions; use validate_system
// to get a report. Sensor ids are 1-based throughout the library.
class SystemModel {
 public:
  SystemModel(Eigen::MatrixXd A, CovMatrix proc_noise,
              std::vector<SensorModel> sensors);

  const Eigen::MatrixXd& A() const { return A_; }
  const CovMatrix& proc_noise() const { return proc_noise_; }
  const std::vector<SensorModel>& sensors() const { return sensors_; }

  int state_dim() const { return static_cast<int>(A_.rows()); }
  int num_sensors() const { return static_cast<int>(sensors_.size()); }

  // Throws InputError unless 1 <= id <= M.
  const SensorModel& sensor(int id) const;

  double lambda_w_minus() const { return lambda_w_minus_; }
  double lambda_v_minus() const { return lambda_v_minus_; }
  double a_norm() const { return a_norm_; }

 private:
  Eigen::MatrixXd A_;
  CovMatrix proc_noise_;
  std::vector<SensorModel> sensors_;
  double lambda_w_minus_;
  double lambda_v_minus_;
  double a_norm_;
};

struct Violation {
  std::string invariant;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_system(const SystemModel& model);

// Throws InputError carrying the report text when validation fails.
void require_valid(const SystemModel& model);

// Largest singular value. Throws NumericalError("non-finite input").
double spectral_norm(const Eigen::MatrixXd& m);

// Spectral norm of a symmetric matrix via its eigenvalues.
double symmetric_norm(const Eigen::MatrixXd& m);

double lambda_min_symmetric(const Eigen::MatrixXd& m);
double lambda_max_symmetric(const Eigen::MatrixXd& m);

}  // namespace sensched

#endif  // SENSCHED_MODEL_H_

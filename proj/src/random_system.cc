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

#include "sensched/random_system.h"

#include <complex>

namespace sensched {
namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

CovMatrix random_psd(std::mt19937_64& rng, int n, double scale, double shift) {
  const Eigen::MatrixXd G = gaussian(rng, n, n);
  return CovMatrix(scale * G * G.transpose() + shift * Eigen::MatrixXd::Identity(n, n));
}

SystemModel random_system(std::mt19937_64& rng, const RandomSystemOptions& options) {
  const int n = uniform_int(rng, options.min_dim, options.max_dim);
  const int m = uniform_int(rng, options.min_sensors, options.max_sensors);
  const double radius = options.spectral_radii[static_cast<std::size_t>(
      uniform_int(rng, 0, static_cast<int>(options.spectral_radii.size()) - 1))];

  Eigen::MatrixXd A = gaussian(rng, n, n);
  double current = 0.0;
  while (current < 1e-3) {
    current = Eigen::EigenSolver<Eigen::MatrixXd>(A).eigenvalues().cwiseAbs().maxCoeff();
    if (current < 1e-3) A = gaussian(rng, n, n);
  }
  A *= radius / current;

  std::vector<SensorModel> sensors;
  for (int i = 0; i < m; ++i) {
    const int p = uniform_int(rng, 1, n);
    Eigen::MatrixXd C;
    do {
      C = gaussian(rng, p, n);
    } while (Eigen::JacobiSVD<Eigen::MatrixXd>(C).singularValues().minCoeff() < 1e-3);
    sensors.push_back({C, random_psd(rng, p, 1.0, 0.1)});
  }
  return SystemModel(A, random_psd(rng, n, 1.0, 0.1), std::move(sensors));
}

SensorWord random_word(std::mt19937_64& rng, int length, int num_sensors) {
  SensorWord word(static_cast<std::size_t>(length));
  for (int& id : word) id = uniform_int(rng, 1, num_sensors);
  return word;
}

}  // namespace sensched

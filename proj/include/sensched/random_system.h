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

#ifndef SENSCHED_RANDOM_SYSTEM_H_
#define SENSCHED_RANDOM_SYSTEM_H_

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sensched/model.h"
#include "sensched/riccati.h"

namespace sensched {

struct RandomSystemOptions {
  int min_dim = 1;
  int max_dim = 3;
  int min_sensors = 1;
  int max_sensors = 3;
  std::vector<double> spectral_radii{0.8, 1.1, 1.5};
};

// A has Gaussian entries rescaled to a spectral radius drawn from
// `spectral_radii`; each C_i is a full-row-rank Gaussian p_i x n matrix with
// p_i in 1..n; noise covariances are G G^T + 0.1 I.
SystemModel random_system(std::mt19937_64& rng, const RandomSystemOptions& options = {});

// G G^T * scale + shift * I with G Gaussian n x n.
CovMatrix random_psd(std::mt19937_64& rng, int n, double scale = 1.0, double shift = 0.0);

SensorWord random_word(std::mt19937_64& rng, int length, int num_sensors);

}  // namespace sensched

#endif  // SENSCHED_RANDOM_SYSTEM_H_

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

#include "sensched/periodic.h"

#include <cmath>
#include <string>

#include "sensched/errors.h"

namespace sensched {
namespace {

constexpr double kDivergenceNorm = 1e100;
constexpr int kPowerIterations = 50;
constexpr double kPowerTol = 1e-8;

CovMatrix apply_word(const SystemModel& model, const SensorWord& word, CovMatrix phi) {
  for (int id : word) phi = riccati_map(model, id, phi);
  return phi;
}

double late_ratio(const std::vector<double>& residuals) {
  // Geometric mean of up to five trailing ratios above the round-off floor.
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t i = residuals.size(); i >= 2 && count < 5; --i) {
    const double prev = residuals[i - 2];
    const double cur = residuals[i - 1];
    if (prev < 1e-14 || cur <= 0.0) continue;
    log_sum += std::log(cur / prev);
    ++count;
  }
  return count == 0 ? 0.0 : std::exp(log_sum / count);
}

}  // namespace

FixedPointResult fixed_point(const SystemModel& model, const SensorWord& word,
                             const FixedPointConfig& config) {
  if (word.empty()) throw InputError("fixed_point needs a non-empty period word");
  if (config.max_iters < 1) throw InputError("fixed_point needs max_iters >= 1");

  CovMatrix phi = config.init.value_or(model.proc_noise());
  std::vector<double> residuals;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    CovMatrix next = phi;
    try {
      next = apply_word(model, word, phi);
    } catch (const NumericalError& e) {
      throw ConvergenceError(std::string("no convergence: iterates diverged (") + e.what() +
                                 ")",
                             std::move(residuals));
    }
    const double phi_norm = phi.lambda_max();
    const double step = symmetric_norm(next.matrix() - phi.matrix());
    const double rel = step / (1.0 + phi_norm);
    residuals.push_back(rel);
    if (!(next.lambda_max() < kDivergenceNorm)) {
      throw ConvergenceError("no convergence: iterates diverged (word " +
                                 word_to_string(word) + ")",
                             std::move(residuals));
    }
    phi = std::move(next);
    if (rel <= config.fp_tol) return {std::move(phi), iter, rel, std::move(residuals)};
  }
  throw ConvergenceError(
      "no convergence: schedule may be infeasible or period map not contractive at this "
      "tolerance (word " + word_to_string(word) + ")",
      std::move(residuals));
}

FixedPointResult fixed_point(const SystemModel& model, const Schedule& sched,
                             const FixedPointConfig& config) {
  if (!sched.is_periodic()) throw InputError("fixed_point needs a periodic schedule");
  return fixed_point(model, sched.word(), config);
}

NCycle n_cycle(const SystemModel& model, const SensorWord& word,
               const FixedPointConfig& config) {
  FixedPointResult fp = fixed_point(model, word, config);

  NCycle cycle;
  cycle.word = word;
  cycle.iterations = fp.iterations;
  cycle.contraction_factor = late_ratio(fp.residuals);
  cycle.points.reserve(word.size());
  cycle.points.push_back(fp.P);
  double total = 0.0;
  for (std::size_t t = 0; t < word.size(); ++t) {
    CovMatrix next = riccati_map(model, word[t], cycle.points.back());
    total += next.trace();
    if (t + 1 < word.size()) {
      cycle.points.push_back(std::move(next));
    } else {
      cycle.closure_residual = symmetric_norm(next.matrix() - cycle.points.front().matrix());
    }
  }
  cycle.cycle_avg_cost = total / static_cast<double>(word.size());
  return cycle;
}

StabilityCertificate stability_certificate(const SystemModel& model, const NCycle& cycle) {
  if (cycle.points.size() != cycle.word.size() || cycle.word.empty()) {
    throw InputError("stability_certificate needs a complete cycle");
  }
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(cycle.word.size());
  for (std::size_t t = 0; t < cycle.word.size(); ++t) {
    const int id = cycle.word[t];
    const Eigen::MatrixXd K = kalman_gain(model, id, cycle.points[t]);
    factors.push_back(model.A() - K * model.sensor(id).C);
  }
  auto apply = [&factors](Eigen::MatrixXd D) {
    for (const Eigen::MatrixXd& F : factors) D = F * D * F.transpose();
    return Eigen::MatrixXd(0.5 * (D + D.transpose()));
  };

  const int n = model.state_dim();
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n) / std::sqrt(static_cast<double>(n));
  std::vector<double> ratios;
  StabilityCertificate cert;
  for (int k = 1; k <= kPowerIterations; ++k) {
    const Eigen::MatrixXd next = apply(D);
    const double ratio = next.norm();  // |D|_F = 1
    ratios.push_back(ratio);
    cert.iterations = k;
    if (ratio == 0.0) break;
    D = next / ratio;
    if (k > 1 && std::abs(ratio - ratios[ratios.size() - 2]) <= kPowerTol * ratio) break;
  }

  const double last = ratios.back();
  const bool settled = last == 0.0 ||
                       (ratios.size() > 1 &&
                        std::abs(last - ratios[ratios.size() - 2]) <= kPowerTol * last);
  if (settled) {
    cert.rho_est = last;
  } else {
    // Oscillating ratios (complex dominant modes): geometric mean of the tail.
    double log_sum = 0.0;
    const std::size_t half = ratios.size() / 2;
    for (std::size_t i = half; i < ratios.size(); ++i) log_sum += std::log(ratios[i]);
    cert.rho_est = std::exp(log_sum / static_cast<double>(ratios.size() - half));
  }
  cert.stable = cert.rho_est < 1.0;
  return cert;
}

}  // namespace sensched

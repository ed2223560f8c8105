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

#include "sensched/verify.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "sensched/errors.h"
#include "sensched/periodic.h"
#include "sensched/random_system.h"
#include "sensched/riccati.h"

namespace sensched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

CovMatrix shifted(const CovMatrix& phi, double eps) {
  return CovMatrix(phi.matrix() + eps * Eigen::MatrixXd::Identity(phi.dim(), phi.dim()));
}

// Symmetric square root of a PSD matrix.
Eigen::MatrixXd psd_sqrt(const CovMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (pass ? "[PASS] " : "[FAIL] ") << name << " (" << instance << ") margin=" << margin
     << "\n";
  for (const auto& [key, value] : details) os << "    " << key << " = " << value << "\n";
  for (const std::string& note : notes) os << "    note: " << note << "\n";
  return os.str();
}

Lemma1Margins lemma1_margins(const SystemModel& model, int sensor, const CovMatrix& Q1,
                             const CovMatrix& Q2, double c) {
  const Eigen::MatrixXd r1 = riccati_map(model, sensor, Q1).matrix();
  const Eigen::MatrixXd r2 = riccati_map(model, sensor, Q2).matrix();
  const CovMatrix mix(c * Q1.matrix() + (1.0 - c) * Q2.matrix());
  const Eigen::MatrixXd rmix = riccati_map(model, sensor, mix).matrix();
  return {lambda_min_symmetric(r2 - r1),
          lambda_min_symmetric(rmix - c * r1 - (1.0 - c) * r2)};
}

CheckReport check_lemma1(std::uint64_t seed, int count) {
  constexpr double kTol = 1e-9;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomSystemOptions options;
  options.max_dim = 4;

  double mono = kInf, conc = kInf;
  for (int i = 0; i < count; ++i) {
    const SystemModel model = random_system(rng, options);
    const int sensor = std::uniform_int_distribution<int>(1, model.num_sensors())(rng);
    const int n = model.state_dim();
    const CovMatrix Q1 = random_psd(rng, n, 10.0 * unit(rng));
    const CovMatrix Q2(Q1.matrix() + random_psd(rng, n, 10.0 * unit(rng)).matrix());
    const Lemma1Margins m = lemma1_margins(model, sensor, Q1, Q2, unit(rng));
    mono = std::min(mono, m.monotone);
    conc = std::min(conc, m.concave);
  }

  CheckReport report;
  report.name = "lemma1";
  report.instance = "seed=" + std::to_string(seed) + " count=" + std::to_string(count);
  report.details = {{"monotone_lambda_min", mono}, {"concave_lambda_min", conc},
                    {"tolerance", -kTol}};
  report.set_margin(std::min(mono, conc) + kTol);
  return report;
}

double first_order_gap(const SystemModel& model, const CovMatrix& phi,
                       const SensorWord& sensors, double eps) {
  const Trajectory base = propagate(model, phi, sensors);
  const Trajectory bumped = propagate(model, shifted(phi, eps), sensors);
  const std::vector<Eigen::MatrixXd> g = directional_derivative(model, phi, sensors);
  double gap = kInf;
  for (std::size_t t = 0; t < sensors.size(); ++t) {
    gap = std::min(gap, lambda_min_symmetric(base.covs[t].matrix() + eps * g[t] -
                                             bumped.covs[t].matrix()));
  }
  return gap;
}

CheckReport check_prop1(std::uint64_t seed, int count, int horizon) {
  constexpr double kBoundSlack = 1e-7;
  constexpr double kBetaCap = 1e3;
  constexpr int kFdSteps = 20;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double trace_margin = kInf, first_order = kInf, fd_margin = kInf;
  int accepted = 0, rejected = 0;
  while (accepted < count) {
    const SystemModel model = random_system(rng);
    const int n = model.state_dim();
    const CovMatrix phi = random_psd(rng, n, 1.0, 0.5);
    const SensorWord sensors = random_word(rng, horizon, model.num_sensors());
    const Trajectory traj = propagate(model, phi, sensors);
    double beta = phi.lambda_max();
    for (const CovMatrix& s : traj.covs) beta = std::max(beta, s.lambda_max());
    if (beta > kBetaCap) {
      ++rejected;
      continue;
    }
    ++accepted;

    const TraceBoundReport tb = prop1_trace_bound(model, phi, sensors, beta);
    trace_margin = std::min(trace_margin, tb.min_margin);

    const double eps = 0.1 * (1.0 - unit(rng));  // (0, 0.1]
    first_order = std::min(first_order, first_order_gap(model, phi, sensors, eps));

    const SensorWord head(sensors.begin(),
                          sensors.begin() + std::min(kFdSteps, horizon));
    const std::vector<Eigen::MatrixXd> g = directional_derivative(model, phi, head);
    const double h = 1e-5 * (1.0 + phi.lambda_max());
    const Trajectory plus = propagate(model, shifted(phi, h), head);
    const Trajectory minus = propagate(model, shifted(phi, -h), head);
    for (std::size_t t = 0; t < head.size(); ++t) {
      const Eigen::MatrixXd fd = (plus.covs[t].matrix() - minus.covs[t].matrix()) / (2 * h);
      const double gnorm = symmetric_norm(g[t]);
      fd_margin =
          std::min(fd_margin, 1e-5 * (1.0 + gnorm) - symmetric_norm(g[t] - fd));
    }
  }

  CheckReport report;
  report.name = "prop1";
  report.instance = "seed=" + std::to_string(seed) + " count=" + std::to_string(count) +
                    " T=" + std::to_string(horizon);
  report.details = {{"trace_bound_min_slack", trace_margin},
                    {"first_order_min_slack", first_order},
                    {"finite_difference_min_margin", fd_margin},
                    {"rejected_unbounded", static_cast<double>(rejected)}};
  report.notes.push_back("trajectory bound beta is the observed max over [0, T]; "
                         "the bound is checked on [1, T] only");
  report.set_margin(std::min({trace_margin + kBoundSlack, first_order + kBoundSlack,
                              fd_margin}));
  return report;
}

CheckReport check_theorem1_instance(const SystemModel& model, const SensorWord& word,
                                    const CovMatrix& phi1, const CovMatrix& phi2,
                                    int horizon) {
  const Schedule sched = Schedule::Periodic(word);
  const SensorWord sensors = sched.prefix(horizon);
  const Trajectory a = propagate(model, phi1, sensors);
  const Trajectory b = propagate(model, phi2, sensors);
  const double initial = symmetric_norm(phi1.matrix() - phi2.matrix());

  CheckReport report;
  report.name = "theorem1";
  report.instance = "word=" + word_to_string(word) + " T=" + std::to_string(horizon);
  if (initial == 0.0) {
    report.notes.push_back("identical initial covariances");
    report.set_margin(0.0);
    return report;
  }

  // The slope is fitted on the decay segment, up to the first step where the
  // difference reaches the round-off floor.
  std::vector<double> xs, ys;
  double terminal = 0.0;
  bool decaying = true;
  for (int t = 1; t <= horizon; ++t) {
    const auto idx = static_cast<std::size_t>(t - 1);
    const double diff = symmetric_norm(a.covs[idx].matrix() - b.covs[idx].matrix());
    const double floor = 1e-10 * (1.0 + a.covs[idx].lambda_max());
    if (diff <= floor) decaying = false;
    if (decaying) {
      xs.push_back(t);
      ys.push_back(std::log(diff));
    }
    if (t == horizon) terminal = diff;
  }
  const double ratio = terminal / initial;
  double slope_margin = 1.0;
  if (xs.size() >= 2) {
    const double slope = fitted_slope(xs, ys);
    report.details.push_back({"log_slope", slope});
    slope_margin = -slope;
  } else {
    report.notes.push_back("difference reached the round-off floor within two steps");
  }

  const double limsup_a = limsup_cost(model, phi1, sched).limsup_estimate;
  const double limsup_b = limsup_cost(model, phi2, sched).limsup_estimate;
  const double limsup_diff = std::abs(limsup_a - limsup_b);

  report.details.push_back({"terminal_ratio", ratio});
  report.details.push_back({"limsup_difference", limsup_diff});
  const double ratio_margin = ratio == 0.0 ? 1.0 : std::log10(1e-8) - std::log10(ratio);
  report.set_margin(std::min({ratio_margin, slope_margin, 1e-6 - limsup_diff}));
  return report;
}

CheckReport check_theorem1(std::uint64_t seed, int count, int horizon) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckReport report;
  report.name = "theorem1";
  report.instance = "seed=" + std::to_string(seed) + " count=" + std::to_string(count) +
                    " T=" + std::to_string(horizon);
  double margin = kInf, worst_ratio = 0.0, worst_limsup = 0.0;
  int accepted = 0, rejected = 0;
  while (accepted < count) {
    const SystemModel model = random_system(rng);
    const int len = std::uniform_int_distribution<int>(1, 4)(rng);
    const SensorWord word = random_word(rng, len, model.num_sensors());
    const int n = model.state_dim();
    const CovMatrix phi1 = random_psd(rng, n, 10.0 * unit(rng));
    const CovMatrix phi2 = random_psd(rng, n, 10.0 * unit(rng));
    try {
      n_cycle(model, word);
    } catch (const ConvergenceError&) {
      ++rejected;
      continue;
    }
    const Schedule sched = Schedule::Periodic(word);
    if (!feasibility_check(model, phi1, sched).feasible ||
        !feasibility_check(model, phi2, sched).feasible) {
      ++rejected;
      continue;
    }
    ++accepted;
    const CheckReport r = check_theorem1_instance(model, word, phi1, phi2, horizon);
    margin = std::min(margin, r.margin);
    for (const auto& [key, value] : r.details) {
      if (key == "terminal_ratio") worst_ratio = std::max(worst_ratio, value);
      if (key == "limsup_difference") worst_limsup = std::max(worst_limsup, value);
    }
  }
  report.details = {{"worst_terminal_ratio", worst_ratio},
                    {"worst_limsup_difference", worst_limsup},
                    {"rejected_infeasible", static_cast<double>(rejected)}};
  report.set_margin(margin);
  return report;
}

CheckReport check_example1(int lambda, double c, double d, int k_max) {
  const Example1Construction ex = example1_schedule(lambda, k_max);
  const SystemModel model = example1_model(lambda, c, d);
  const double target = example1_phistar(lambda, c, d) + c;
  const double cap = 1e6 * model.proc_noise().trace();

  // Sigma_{t21^k - 1}(1,1) and J_{t12^{k+1}} / t12^{k+1}.
  std::vector<double> peak(static_cast<std::size_t>(k_max));
  std::vector<double> union_avg(static_cast<std::size_t>(k_max));
  CovMatrix state = CovMatrix::Zero(2);
  double total = 0.0;
  std::int64_t t = 0;
  for (const Example1Interval& iv : ex.intervals) {
    const auto k = static_cast<std::size_t>(iv.k - 1);
    for (; t < iv.t12_next; ++t) {
      if (t == iv.t21 - 1) peak[k] = state.matrix()(0, 0);
      state = riccati_map(model, ex.schedule.at(t), state);
      total += state.trace();
    }
    union_avg[k] = total / static_cast<double>(iv.t12_next);
  }

  CheckReport report;
  report.name = "example1";
  report.instance = "lambda=" + std::to_string(lambda) + " c=" + fmt(c) + " d=" + fmt(d) +
                    " k_max=" + std::to_string(k_max);
  std::vector<double> margins;

  if (k_max >= 2) {
    double rise = kInf;
    for (int k = 1; k < k_max; ++k) rise = std::min(rise, peak[k] - peak[k - 1]);
    const double largest = *std::max_element(peak.begin(), peak.end());
    report.details.push_back({"peak_min_increase", rise});
    report.details.push_back({"peak_at_k_max", peak.back()});
    report.details.push_back({"divergence_cap", cap});
    margins.push_back(rise);
    margins.push_back(std::log10(largest / cap));
  } else {
    report.notes.push_back("divergence check inconclusive: needs at least 2 intervals");
  }

  report.details.push_back({"union_average_at_k_max", union_avg.back()});
  report.details.push_back({"target_phistar_plus_c", target});
  if (k_max >= 4) {
    double approach = kInf;
    for (int k = 4; k <= k_max; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      approach = std::min(approach, std::abs(union_avg[i - 1] - target) -
                                        std::abs(union_avg[i] - target));
    }
    report.details.push_back({"union_average_min_improvement", approach});
    margins.push_back(approach);
  } else {
    report.notes.push_back("monotone approach inconclusive: needs k_max >= 4");
  }
  if (k_max >= 3) {
    margins.push_back(0.05 - std::abs(union_avg.back() - target));
  } else {
    report.notes.push_back("closeness check inconclusive: needs k_max >= 3");
  }

  const double exclusive =
      limsup_cost(model, CovMatrix::Zero(2), Schedule::Periodic({1})).limsup_estimate;
  report.details.push_back({"sensor1_only_cost", exclusive});
  margins.push_back(1e-4 - std::abs(exclusive - target));

  report.set_margin(*std::min_element(margins.begin(), margins.end()));
  return report;
}

CheckReport monte_carlo_consistency(const SystemModel& model, const Schedule& sched,
                                    const CovMatrix& phi, int horizon, int n_runs,
                                    std::uint64_t seed, std::vector<int> checkpoints) {
  if (horizon < 1 || n_runs < 1) throw InputError("monte_carlo needs horizon, n_runs >= 1");
  std::erase_if(checkpoints, [horizon](int t) { return t < 1 || t > horizon; });
  const int n = model.state_dim();
  const SensorWord sensors = sched.prefix(horizon);
  const Trajectory predicted = propagate(model, phi, sensors);

  // Filter gains along the deterministic covariance sequence.
  std::vector<Eigen::MatrixXd> filter_gain;
  std::vector<Eigen::MatrixXd> meas_sqrt;
  CovMatrix sigma = phi;
  for (int t = 0; t < horizon; ++t) {
    const SensorModel& s = model.sensor(sensors[static_cast<std::size_t>(t)]);
    const Eigen::MatrixXd S = s.C * sigma.matrix() * s.C.transpose() + s.meas_noise.matrix();
    filter_gain.push_back(
        S.llt().solve(s.C * sigma.matrix()).transpose());  // Sigma C^T S^{-1}
    meas_sqrt.push_back(psd_sqrt(s.meas_noise));
    sigma = predicted.covs[static_cast<std::size_t>(t)];
  }
  const Eigen::MatrixXd init_sqrt = psd_sqrt(phi);
  const Eigen::MatrixXd proc_sqrt = psd_sqrt(model.proc_noise());

  constexpr int kChunk = 1024;
  const int chunks = (n_runs + kChunk - 1) / kChunk;
  const std::size_t slots = checkpoints.size();
  std::vector<std::vector<Eigen::MatrixXd>> chunk_sums(
      static_cast<std::size_t>(chunks),
      std::vector<Eigen::MatrixXd>(slots, Eigen::MatrixXd::Zero(n, n)));

  auto run_chunk = [&](int chunk) {
    auto& sums = chunk_sums[static_cast<std::size_t>(chunk)];
    const int begin = chunk * kChunk;
    const int end = std::min(n_runs, begin + kChunk);
    auto draw = [](std::mt19937_64& rng, std::normal_distribution<double>& normal,
                   const Eigen::MatrixXd& root) {
      Eigen::VectorXd z(root.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
      return Eigen::VectorXd(root * z);
    };
    for (int run = begin; run < end; ++run) {
      std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(run)));
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXd x = draw(rng, normal, init_sqrt);
      Eigen::VectorXd x_pred = Eigen::VectorXd::Zero(n);
      std::size_t slot = 0;
      for (int t = 0; t < horizon; ++t) {
        const SensorModel& s = model.sensor(sensors[static_cast<std::size_t>(t)]);
        const Eigen::VectorXd y = s.C * x + draw(rng, normal, meas_sqrt[static_cast<std::size_t>(t)]);
        const Eigen::VectorXd x_filt =
            x_pred + filter_gain[static_cast<std::size_t>(t)] * (y - s.C * x_pred);
        x = model.A() * x + draw(rng, normal, proc_sqrt);
        x_pred = model.A() * x_filt;
        if (slot < slots && checkpoints[slot] == t + 1) {
          const Eigen::VectorXd e = x - x_pred;
          sums[slot] += e * e.transpose();
          ++slot;
        }
      }
    }
  };

  const int workers =
      std::max(1, std::min(chunks, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int chunk = w; chunk < chunks; chunk += workers) run_chunk(chunk);
    });
  }
  for (std::thread& th : pool) th.join();

  const double tol = std::max(0.05, 5.0 / std::sqrt(static_cast<double>(n_runs)));
  CheckReport report;
  report.name = "monte_carlo";
  report.instance = "T=" + std::to_string(horizon) + " n_runs=" + std::to_string(n_runs) +
                    " seed=" + std::to_string(seed);
  double margin = kInf;
  for (std::size_t slot = 0; slot < slots; ++slot) {
    Eigen::MatrixXd empirical = Eigen::MatrixXd::Zero(n, n);
    for (const auto& sums : chunk_sums) empirical += sums[slot];
    empirical /= static_cast<double>(n_runs);
    const Eigen::MatrixXd& expected =
        predicted.covs[static_cast<std::size_t>(checkpoints[slot] - 1)].matrix();
    const double rel = symmetric_norm(empirical - expected) / symmetric_norm(expected);
    report.details.push_back({"relative_error_t" + std::to_string(checkpoints[slot]), rel});
    margin = std::min(margin, tol - rel);
  }
  report.details.push_back({"tolerance", tol});
  if (slots == 0) {
    report.notes.push_back("no checkpoints inside the horizon");
    margin = 0.0;
  }
  report.set_margin(margin);
  return report;
}

CheckReport check_corollary3(const SystemModel& model, const SearchResult& result,
                             int horizon) {
  const Schedule sched = result.best_schedule();
  LimsupConfig config;
  config.horizon = horizon;
  config.burn_in = horizon / 10;
  config.window = horizon / 2;
  const CostSeries series = limsup_cost(model, model.proc_noise(), sched, config);
  const double spread = series.limsup_estimate - series.liminf_estimate;

  CheckReport report;
  report.name = "corollary3";
  report.instance = "word=" + word_to_string(result.best_word) + " T=" + std::to_string(horizon);
  report.details = {{"limit_estimate", series.limsup_estimate},
                    {"window_spread", spread},
                    {"search_best_cost", result.best_cost}};
  report.set_margin(1e-5 - spread);
  return report;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma1",  "prop1",       "theorem1",
                                              "example1", "monte_carlo", "corollary3"};
  return names;
}

std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "all") {
    std::vector<CheckReport> all;
    for (const std::string& s : suite_names()) {
      std::vector<CheckReport> part = run_suite(s, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (name == "lemma1") return {check_lemma1(seed)};
  if (name == "prop1") return {check_prop1(seed)};
  if (name == "theorem1") return {check_theorem1(seed)};
  if (name == "example1") return {check_example1()};
  if (name == "monte_carlo") {
    const SystemModel model = example1_model(2.0, 1.0, 1.0);
    return {monte_carlo_consistency(model, Schedule::Periodic({1}), model.proc_noise(), 50,
                                    100'000, seed)};
  }
  if (name == "corollary3") {
    const SystemModel model = example1_model(2.0, 1.0, 1.0);
    return {check_corollary3(model, enumerate_periodic(model, 3))};
  }
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace sensched

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

// Acceptance criteria runner. Prints one PASS or FAIL line per criterion and
// exits nonzero when any selected criterion fails.
//
//   sensched_acceptance [--criterion N] [--seed S]

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sensched/errors.h"
#include "sensched/periodic.h"
#include "sensched/random_system.h"
#include "sensched/search.h"
#include "sensched/verify.h"

namespace {

using namespace sensched;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(bool ok, const std::string& what, double value, double limit) {
    std::ostringstream os;
    os << std::setprecision(17) << (ok ? "ok   " : "MISS ") << what << ": " << value
       << " (limit " << limit << ")";
    lines.push_back(os.str());
    pass = pass && ok;
  }
  void report(const CheckReport& r) {
    std::istringstream in(r.to_text());
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    pass = pass && r.pass;
  }
};

struct Criterion {
  int id;
  std::string title;
  double runtime_limit;  // seconds; 0 when unconstrained
  std::function<Outcome(std::uint64_t)> run;
};

// Closed-form equilibrium of the scalar equation for state 1.
double phistar(double lam, double c, double d) {
  const double b = d - c - lam * lam * d;
  return (std::sqrt(b * b + 4.0 * c * d) - b) / 2.0;
}

Outcome c1(std::uint64_t) {
  Outcome o;
  const SystemModel e = example1_model(2.0, 1.0, 1.0);
  const double p = phistar(2, 1, 1);
  o.expect(std::abs(p - (std::sqrt(20.0) + 4.0) / 2.0) < 1e-15, "phi* closed form", p, 1e-15);
  const FixedPointResult fp = fixed_point(e, SensorWord{1});
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = p;
  expected(1, 1) = 1.0;
  const double err = (fp.P.matrix() - expected).cwiseAbs().maxCoeff();
  o.expect(err <= 1e-9, "max |P - diag{phi*, c}|", err, 1e-9);
  const double cost = n_cycle(e, {1}).cycle_avg_cost;
  o.expect(std::abs(cost - (p + 1.0)) <= 1e-9, "|cycle cost - (phi* + c)|", std::abs(cost - p - 1.0),
           1e-9);
  return o;
}

Outcome c2(std::uint64_t) {
  Outcome o;
  o.report(check_example1(2, 1.0, 1.0, 6));
  return o;
}

Outcome c3(std::uint64_t seed) {
  Outcome o;
  o.report(check_lemma1(seed, 1000));
  return o;
}

Outcome c4(std::uint64_t seed) {
  Outcome o;
  o.report(check_prop1(seed, 50, 50));
  return o;
}

Outcome c5(std::uint64_t seed) {
  Outcome o;
  o.report(check_theorem1(seed, 50, 500));
  return o;
}

Outcome c6(std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  int agreed = 0, checked = 0, skipped = 0;
  std::int64_t pruned = 0;
  while (checked < 50) {
    const SystemModel m = random_system(rng);
    const int L = std::uniform_int_distribution<int>(1, 4)(rng);
    SearchConfig off;
    off.prune = false;
    try {
      const SearchResult a = enumerate_periodic(m, L);
      const SearchResult b = enumerate_periodic(m, L, off);
      ++checked;
      pruned += a.pruned;
      if (a.best_word == b.best_word && a.best_cost == b.best_cost) ++agreed;
    } catch (const FeasibilityError&) {
      ++skipped;
    }
  }
  o.expect(agreed == checked, "instances with identical word and cost", agreed, checked);
  o.lines.push_back("     candidates pruned in total: " + std::to_string(pruned) +
                    ", instances without a feasible word: " + std::to_string(skipped));
  return o;
}

Outcome c7(std::uint64_t) {
  Outcome o;
  const SystemModel e = example1_model(2.0, 1.0, 1.0);
  const OracleResult oracle = brute_force_oracle(e, CovMatrix::Zero(2), 4);
  o.expect(oracle.word == SensorWord{1, 1, 1, 1}, "oracle word is 1 1 1 1 (got " +
           word_to_string(oracle.word) + ")", oracle.avg_cost, 0);
  const SearchResult r = enumerate_periodic(e, 3);
  o.expect(r.best_word == SensorWord{1}, "search word is 1 (got " + word_to_string(r.best_word) + ")",
           r.best_cost, 0);
  const double gap = std::abs(r.best_cost - (phistar(2, 1, 1) + 1.0));
  o.expect(gap <= 1e-9, "|search cost - (phi* + c)|", gap, 1e-9);
  return o;
}

Outcome c8(std::uint64_t seed) {
  Outcome o;
  const SystemModel e = example1_model(2.0, 1.0, 1.0);
  const ApproxResult a = universal_approx_construct(e, Schedule::Periodic({1}), 1e-6);
  const double exact = n_cycle(e, {1}).cycle_avg_cost;
  o.expect(std::abs(a.cycle_cost - exact) < 1e-6, "(a) periodic input |cost - input cost|",
           std::abs(a.cycle_cost - exact), 1e-6);

  // Two sensors, each of which observes the whole state, so that either one
  // alone is feasible.
  Eigen::MatrixXd A(2, 2), C1(1, 2), C2(1, 2);
  A << 1.1, 0.3, 0.0, 0.9;
  C1 << 1.0, 0.5;
  C2 << 0.2, 1.0;
  const SystemModel m(A, CovMatrix::Identity(2),
                      {SensorModel{C1, CovMatrix::Identity(1)},
                       SensorModel{C2, CovMatrix::Identity(1, 2.0)}});
  const Schedule s = pseudo_random_schedule(seed, 2);
  const ApproxResult b = universal_approx_construct(m, s, 1e-2);
  const double estimate = limsup_cost(m, m.proc_noise(), s).limsup_estimate;
  o.expect(std::abs(b.cycle_cost - estimate) < 1e-2,
           "(b) pseudo-random rule |cycle cost - T=2000 limsup estimate| (period " +
               std::to_string(b.word.size()) + ")",
           std::abs(b.cycle_cost - estimate), 1e-2);
  return o;
}

Outcome c9(std::uint64_t) {
  Outcome o;
  const SystemModel e = example1_model(2.0, 1.0, 1.0);
  o.report(check_corollary3(e, enumerate_periodic(e, 3), 2000));
  return o;
}

Outcome c10(std::uint64_t seed) {
  Outcome o;
  const SystemModel e = example1_model(2.0, 1.0, 1.0);
  o.report(monte_carlo_consistency(e, Schedule::Periodic({1}), e.proc_noise(), 50, 100'000, seed,
                                   {1, 10, 50}));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::uint64_t seed = 42;
  app.add_option("--criterion", only, "Run a single criterion (1-10)");
  app.add_option("--seed", seed, "Seed for randomized criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "Example 1 equilibrium", 1, c1},
      {2, "Example 1 divergent schedule with optimal average", 10, c2},
      {3, "Riccati map monotone and concave", 10, c3},
      {4, "derivative bounds and finite differences", 30, c4},
      {5, "trajectory merging and initial-condition independence", 60, c5},
      {6, "pruning soundness", 60, c6},
      {7, "oracle equivalence", 0, c7},
      {8, "periodic approximation", 60, c8},
      {9, "optimal cost running-average spread", 0, c9},
      {10, "Monte Carlo consistency", 120, c10},
  };

  bool all = true;
  bool found = false;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    found = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(seed);
    } catch (const std::exception& e) {
      o.pass = false;
      o.lines.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.runtime_limit > 0) o.expect(secs < c.runtime_limit, "runtime seconds", secs, c.runtime_limit);
    for (const std::string& l : o.lines) std::cout << "    " << l << "\n";
    std::cout << (o.pass ? "PASS" : "FAIL") << " C" << c.id << " " << c.title << " ("
              << std::fixed << std::setprecision(3) << secs << " s)\n"
              << std::defaultfloat;
    all = all && o.pass;
  }
  if (!found) {
    std::cerr << "unknown criterion " << only << "\n";
    return 2;
  }
  return all ? 0 : 1;
}

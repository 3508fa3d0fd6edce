// Copyright 2026 The DPPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Privacy auditing: exact delta computation for integer noise mechanisms
// via the hockey-stick divergence, plus a Monte-Carlo differential-privacy
// check for end-to-end pipelines and a residual-noise check under
// colluding parties.

#ifndef DPPP_AUDIT_HPP_
#define DPPP_AUDIT_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dppp/mechanisms.hpp"
#include "dppp/rng.hpp"

namespace dppp {

struct DpAuditReport {
  std::string mechanism;
  double epsilon = 0.0;
  double delta_claimed = 0.0;
  double delta_actual = 0.0;
  long long support_bound = 0;  // size of the output support examined
  bool pass = false;
};

// Probability mass function on consecutive integers starting at min_value.
struct Pmf {
  long long min_value = 0;
  std::vector<long double> mass;
};

Pmf binomial_pmf(long long n);
Pmf discrete_gaussian_pmf(double sigma);

// Distribution of the sum of `copies` independent draws (exact h-fold
// self-convolution). The input must sum to 1 within 1e-12; copies >= 1.
Pmf convolve_pmf(const Pmf& pmf, int copies);

// max over shifts s in {+shift, -shift} of sum_k max(0, P(k) - e^eps P(k+s)).
// This is the exact delta of the additive mechanism X -> X + noise on a
// query of the given sensitivity, i.e. the smallest delta for which it is
// (eps, delta)-DP.
double hockey_stick_delta(const Pmf& pmf, double epsilon, long long shift = 1);

// Exact delta of additive Binomial(n, 1/2) noise on a sensitivity-1 count.
// n = 0 gives 1.
double binomial_exact_delta(long long n, double epsilon);

// Exact delta of additive discrete Gaussian noise with the given sigma on a
// query of the given (integer) sensitivity.
double discrete_gaussian_exact_delta(double sigma, double epsilon,
                                     long long sensitivity = 1);

// A randomized function from a set of one-hot teacher votes to a class
// label in [0, n_outputs).
using MechanismRunner =
    std::function<int(const std::vector<std::vector<long long>>&, Rng&)>;

// Runs the mechanism `trials` times on each of two neighboring vote sets
// and compares output frequencies: the mechanism fails if some label
// frequency violates f_a <= e^eps * f_b + delta + slack in either
// direction, where slack ~ 3 * sqrt(ln(2/0.001) / (2 * trials)) absorbs
// Monte-Carlo error at confidence 99.9%. delta_claimed in the report is
// delta + slack.
DpAuditReport empirical_dp_test(
    const MechanismRunner& mechanism,
    const std::vector<std::vector<long long>>& votes_a,
    const std::vector<std::vector<long long>>& votes_b, int n_outputs,
    double epsilon, double delta, long long trials, std::uint64_t seed);

// True when the noise contributed by the non-compromised parties still
// meets the plan's total: compromised parties are assumed to reveal (or
// subtract) their own noise shares. Compromised indices must be distinct,
// lie in [0, n_parties) and number at most floor(n_parties / 3).
bool collusion_residual_check(const BinomialPlan& plan, int n_parties,
                              const std::vector<int>& compromised);
bool collusion_residual_check(const GaussianPlan& plan, int n_parties,
                              const std::vector<int>& compromised);

}  // namespace dppp

#endif  // DPPP_AUDIT_HPP_

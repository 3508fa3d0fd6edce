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
// Noise calibration and sampling for distributed differential privacy.
//
// Two mechanisms are supported. The binomial mechanism spreads a total of
// n_total fair coin tosses across the honest parties; the sum of the
// centered tosses approximates Gaussian noise and satisfies (eps, delta)-DP
// once n_total >= 2*((2+eps)/eps)^2 * ln(2/delta). The discrete Gaussian
// mechanism gives each honest party an integer-valued Gaussian with
// sigma_per_party = sigma_total / sqrt(honest_count), with sigma_total from
// the analytic (tight) Gaussian calibration.
//
// Only a gamma fraction of the parties is assumed honest; plans provision
// enough noise that the honest subset alone meets the privacy target.

#ifndef DPPP_MECHANISMS_HPP_
#define DPPP_MECHANISMS_HPP_

#include <cstdint>
#include <vector>

#include "dppp/rng.hpp"

namespace dppp {

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 1e-3;
  double gamma = 1.0;  // assumed honest fraction, in (0, 1]

  // Throws InvalidArgumentError unless epsilon > 0, delta in (0, 1) and
  // gamma in (0, 1].
  void validate() const;
};

struct BinomialPlan {
  long long n_total = 0;      // tosses needed across all honest parties
  long long m_per_party = 0;  // tosses per party, even
  int honest_count = 0;
};

struct GaussianPlan {
  double sigma_total = 0.0;
  double sigma_per_party = 0.0;
  int honest_count = 0;
  long long truncation_bound = 0;  // per-party samples lie in [-B, B]
};

// Smallest n with n >= 2*((2+eps)/eps)^2 * ln(2/delta).
long long binomial_min_tosses(double epsilon, double delta);

// Parties assumed honest when a gamma fraction of n_parties is: the
// adversary corrupts floor((1-gamma) * n_parties).
int honest_party_count(double gamma, int n_parties);

// Per-party toss budget: even ceil(n_total / honest_count).
BinomialPlan binomial_plan(const PrivacyParams& params, int n_parties);

// Number of heads in m fair tosses. m must be even and >= 0.
long long sample_binomial_share(long long m, Rng& rng);

double std_normal_cdf(double x);

// delta achieved by a Gaussian with the given sigma at privacy level eps,
// for an L2 sensitivity `sensitivity`:
//   Phi(sens/(2 sigma) - eps sigma/sens) - e^eps Phi(-sens/(2 sigma) - eps sigma/sens)
double analytic_gaussian_delta(double epsilon, double sigma,
                               double sensitivity);

// Smallest sigma meeting (eps, delta), found by bisection on the expression
// above to interval width 1e-12.
double analytic_gaussian_sigma(double epsilon, double delta,
                               double sensitivity);

GaussianPlan discrete_gaussian_plan(const PrivacyParams& params,
                                    int n_parties, double sensitivity);

// Samples integers with pmf proportional to exp(-k^2 / (2 sigma^2)),
// truncated to [-B, B] with B = ceil(12 sigma) (tail mass < 1e-30).
// Construction precomputes the inverse-CDF table; drawing consumes exactly
// one 64-bit word.
class DiscreteGaussianSampler {
 public:
  explicit DiscreteGaussianSampler(double sigma);
  long long operator()(Rng& rng) const;
  long long truncation_bound() const { return bound_; }

 private:
  long long bound_;
  std::vector<long double> cdf_;
};

long long sample_discrete_gaussian(double sigma, Rng& rng);

}  // namespace dppp

#endif  // DPPP_MECHANISMS_HPP_

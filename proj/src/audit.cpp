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

#include "dppp/audit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dppp/errors.hpp"

namespace dppp {
namespace {

// Compensated summation keeps the many tiny tail terms from vanishing.
struct KahanSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double x) {
    long double y = x - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void check_compromised(int n_parties, const std::vector<int>& compromised) {
  if (n_parties < 1) {
    throw InvalidArgumentError("n_parties must be positive");
  }
  std::set<int> seen;
  for (int idx : compromised) {
    if (idx < 0 || idx >= n_parties) {
      throw InvalidArgumentError("compromised index out of range");
    }
    if (!seen.insert(idx).second) {
      throw InvalidArgumentError("duplicate compromised index");
    }
  }
  if (static_cast<int>(compromised.size()) > n_parties / 3) {
    throw InvalidArgumentError(
        "collusion check covers at most floor(N/3) compromised parties");
  }
}

}  // namespace

Pmf binomial_pmf(long long n) {
  if (n < 0) throw InvalidArgumentError("toss count must be non-negative");
  Pmf pmf;
  pmf.min_value = 0;
  pmf.mass.resize(static_cast<std::size_t>(n) + 1);
  long double log_half = logl(0.5L);
  long double lg_n = lgammal(static_cast<long double>(n) + 1.0L);
  for (long long k = 0; k <= n; ++k) {
    long double log_p = lg_n - lgammal(static_cast<long double>(k) + 1.0L) -
                        lgammal(static_cast<long double>(n - k) + 1.0L) +
                        static_cast<long double>(n) * log_half;
    pmf.mass[static_cast<std::size_t>(k)] = expl(log_p);
  }
  return pmf;
}

Pmf discrete_gaussian_pmf(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgumentError("sigma must be positive and finite");
  }
  long long bound = static_cast<long long>(std::ceil(12.0 * sigma));
  long double var2 = 2.0L * static_cast<long double>(sigma) *
                     static_cast<long double>(sigma);
  Pmf pmf;
  pmf.min_value = -bound;
  pmf.mass.resize(static_cast<std::size_t>(2 * bound + 1));
  KahanSum total;
  for (long long k = -bound; k <= bound; ++k) {
    long double w = expl(-static_cast<long double>(k) *
                         static_cast<long double>(k) / var2);
    pmf.mass[static_cast<std::size_t>(k + bound)] = w;
    total.add(w);
  }
  for (auto& w : pmf.mass) w /= total.sum;
  return pmf;
}

namespace {

Pmf convolve_once(const Pmf& a, const Pmf& b) {
  Pmf out;
  out.min_value = a.min_value + b.min_value;
  out.mass.assign(a.mass.size() + b.mass.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.mass.size(); ++i) {
    if (a.mass[i] == 0.0L) continue;
    for (std::size_t j = 0; j < b.mass.size(); ++j) {
      out.mass[i + j] += a.mass[i] * b.mass[j];
    }
  }
  return out;
}

}  // namespace

Pmf convolve_pmf(const Pmf& pmf, int copies) {
  if (pmf.mass.empty()) {
    throw InvalidArgumentError("cannot convolve an empty pmf");
  }
  if (copies < 1) {
    throw InvalidArgumentError("need at least one copy");
  }
  KahanSum total;
  for (long double w : pmf.mass) total.add(w);
  if (fabsl(total.sum - 1.0L) > 1e-12L) {
    throw InvalidArgumentError("pmf is not normalized");
  }
  Pmf out = pmf;
  for (int i = 1; i < copies; ++i) {
    out = convolve_once(out, pmf);
  }
  return out;
}

double hockey_stick_delta(const Pmf& pmf, double epsilon, long long shift) {
  if (pmf.mass.empty()) throw InvalidArgumentError("empty pmf");
  if (shift < 1) throw InvalidArgumentError("shift must be positive");
  long double e_eps = expl(static_cast<long double>(epsilon));
  long double worst = 0.0L;
  for (long long s : {shift, -shift}) {
    KahanSum sum;
    for (std::size_t k = 0; k < pmf.mass.size(); ++k) {
      long double p = pmf.mass[k];
      std::ptrdiff_t src = static_cast<std::ptrdiff_t>(k) +
                           static_cast<std::ptrdiff_t>(s);
      long double q =
          (src >= 0 && src < static_cast<std::ptrdiff_t>(pmf.mass.size()))
              ? pmf.mass[static_cast<std::size_t>(src)]
              : 0.0L;
      long double term = p - e_eps * q;
      if (term > 0.0L) sum.add(term);
    }
    worst = std::max(worst, sum.sum);
  }
  return static_cast<double>(worst);
}

double binomial_exact_delta(long long n, double epsilon) {
  if (n < 0) throw InvalidArgumentError("toss count must be non-negative");
  if (n == 0) return 1.0;
  return hockey_stick_delta(binomial_pmf(n), epsilon);
}

double discrete_gaussian_exact_delta(double sigma, double epsilon,
                                     long long sensitivity) {
  return hockey_stick_delta(discrete_gaussian_pmf(sigma), epsilon,
                            sensitivity);
}

DpAuditReport empirical_dp_test(
    const MechanismRunner& mechanism,
    const std::vector<std::vector<long long>>& votes_a,
    const std::vector<std::vector<long long>>& votes_b, int n_outputs,
    double epsilon, double delta, long long trials, std::uint64_t seed) {
  if (n_outputs < 1 || trials < 1) {
    throw InvalidArgumentError("need at least one output and one trial");
  }
  std::vector<long long> count_a(static_cast<std::size_t>(n_outputs), 0);
  std::vector<long long> count_b(static_cast<std::size_t>(n_outputs), 0);
  Rng rng_a = derive_rng(seed, 0xa001);
  Rng rng_b = derive_rng(seed, 0xb002);
  for (long long i = 0; i < trials; ++i) {
    int out_a = mechanism(votes_a, rng_a);
    int out_b = mechanism(votes_b, rng_b);
    if (out_a < 0 || out_a >= n_outputs || out_b < 0 || out_b >= n_outputs) {
      throw InvalidArgumentError("mechanism output out of range");
    }
    ++count_a[static_cast<std::size_t>(out_a)];
    ++count_b[static_cast<std::size_t>(out_b)];
  }

  double e_eps = std::exp(epsilon);
  double worst = 0.0;
  for (int k = 0; k < n_outputs; ++k) {
    double fa = static_cast<double>(count_a[static_cast<std::size_t>(k)]) /
                static_cast<double>(trials);
    double fb = static_cast<double>(count_b[static_cast<std::size_t>(k)]) /
                static_cast<double>(trials);
    worst = std::max(worst, fa - e_eps * fb);
    worst = std::max(worst, fb - e_eps * fa);
  }

  // Two-sided DKW-style bound at 99.9% on each frequency estimate.
  double slack = 3.0 * std::sqrt(std::log(2.0 / 0.001) /
                                 (2.0 * static_cast<double>(trials)));
  DpAuditReport report;
  report.mechanism = "empirical";
  report.epsilon = epsilon;
  report.delta_claimed = delta + slack;
  report.delta_actual = worst;
  report.support_bound = n_outputs;
  report.pass = worst <= report.delta_claimed;
  return report;
}

bool collusion_residual_check(const BinomialPlan& plan, int n_parties,
                              const std::vector<int>& compromised) {
  check_compromised(n_parties, compromised);
  long long honest = n_parties - static_cast<long long>(compromised.size());
  return honest * plan.m_per_party >= plan.n_total;
}

bool collusion_residual_check(const GaussianPlan& plan, int n_parties,
                              const std::vector<int>& compromised) {
  check_compromised(n_parties, compromised);
  double honest =
      static_cast<double>(n_parties) - static_cast<double>(compromised.size());
  double residual_var =
      honest * plan.sigma_per_party * plan.sigma_per_party;
  double target_var = plan.sigma_total * plan.sigma_total;
  return residual_var >= target_var * (1.0 - 1e-9);
}

}  // namespace dppp

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

#include "dppp/mechanisms.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dppp/errors.hpp"

namespace dppp {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("epsilon must be positive and finite");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw InvalidArgumentError("gamma must lie in (0, 1]");
  }
}

long long binomial_min_tosses(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgumentError("binomial_min_tosses: bad privacy parameters");
  }
  double ratio = (2.0 + epsilon) / epsilon;
  double bound = 2.0 * ratio * ratio * std::log(2.0 / delta);
  return static_cast<long long>(std::ceil(bound));
}

int honest_party_count(double gamma, int n_parties) {
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw InvalidArgumentError("gamma must lie in (0, 1]");
  }
  if (n_parties < 1) {
    throw InvalidArgumentError("n_parties must be positive");
  }
  // The small epsilon keeps binary rounding of gamma (e.g. 2/3) from
  // shifting the floor; ties round toward more corrupted parties.
  int corrupted =
      static_cast<int>(std::floor((1.0 - gamma) * n_parties + 1e-9));
  return n_parties - corrupted;
}

BinomialPlan binomial_plan(const PrivacyParams& params, int n_parties) {
  params.validate();
  BinomialPlan plan;
  plan.n_total = binomial_min_tosses(params.epsilon, params.delta);
  plan.honest_count = honest_party_count(params.gamma, n_parties);
  if (plan.honest_count <= 0) {
    throw InvalidArgumentError(
        "plan needs at least one honest party; gamma too small for N=" +
        std::to_string(n_parties));
  }
  plan.m_per_party =
      (plan.n_total + plan.honest_count - 1) / plan.honest_count;
  if (plan.m_per_party % 2 != 0) ++plan.m_per_party;
  return plan;
}

long long sample_binomial_share(long long m, Rng& rng) {
  if (m < 0 || m % 2 != 0) {
    throw InvalidArgumentError("toss count must be even and non-negative");
  }
  long long heads = 0;
  long long full_words = m / 64;
  for (long long i = 0; i < full_words; ++i) {
    heads += std::popcount(rng());
  }
  int rest = static_cast<int>(m % 64);
  if (rest > 0) {
    std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
    heads += std::popcount(rng() & mask);
  }
  return heads;
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double analytic_gaussian_delta(double epsilon, double sigma,
                               double sensitivity) {
  if (!(sigma > 0.0) || !(sensitivity > 0.0) || epsilon < 0.0) {
    throw InvalidArgumentError("analytic_gaussian_delta: bad arguments");
  }
  double a = sensitivity / (2.0 * sigma);
  double b = epsilon * sigma / sensitivity;
  return std_normal_cdf(a - b) - std::exp(epsilon) * std_normal_cdf(-a - b);
}

double analytic_gaussian_sigma(double epsilon, double delta,
                               double sensitivity) {
  if (!(epsilon > 0.0) || !(delta > 0.0) || !(delta < 1.0) ||
      !(sensitivity > 0.0)) {
    throw InvalidArgumentError("analytic_gaussian_sigma: bad arguments");
  }
  // delta is strictly decreasing in sigma; bracket then bisect.
  double lo = sensitivity / (10.0 * (1.0 + epsilon));
  double hi =
      10.0 * std::sqrt(2.0 * std::log(1.25 / delta)) * sensitivity / epsilon;
  if (analytic_gaussian_delta(epsilon, lo, sensitivity) < delta ||
      analytic_gaussian_delta(epsilon, hi, sensitivity) > delta) {
    throw Error("analytic_gaussian_sigma: failed to bracket solution");
  }
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (analytic_gaussian_delta(epsilon, mid, sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GaussianPlan discrete_gaussian_plan(const PrivacyParams& params,
                                    int n_parties, double sensitivity) {
  params.validate();
  GaussianPlan plan;
  plan.sigma_total =
      analytic_gaussian_sigma(params.epsilon, params.delta, sensitivity);
  plan.honest_count = honest_party_count(params.gamma, n_parties);
  if (plan.honest_count <= 0) {
    throw InvalidArgumentError(
        "plan needs at least one honest party; gamma too small for N=" +
        std::to_string(n_parties));
  }
  plan.sigma_per_party =
      plan.sigma_total / std::sqrt(static_cast<double>(plan.honest_count));
  plan.truncation_bound =
      static_cast<long long>(std::ceil(12.0 * plan.sigma_per_party));
  return plan;
}

DiscreteGaussianSampler::DiscreteGaussianSampler(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgumentError("sigma must be positive and finite");
  }
  bound_ = static_cast<long long>(std::ceil(12.0 * sigma));
  long double var2 = 2.0L * static_cast<long double>(sigma) *
                     static_cast<long double>(sigma);
  cdf_.resize(static_cast<std::size_t>(2 * bound_ + 1));
  long double acc = 0.0L;
  for (long long k = -bound_; k <= bound_; ++k) {
    acc += expl(-static_cast<long double>(k) * static_cast<long double>(k) /
                var2);
    cdf_[static_cast<std::size_t>(k + bound_)] = acc;
  }
  for (auto& c : cdf_) c /= acc;
}

long long DiscreteGaussianSampler::operator()(Rng& rng) const {
  long double u = static_cast<long double>(rng()) * 0x1.0p-64L;
  // First index whose cumulative mass exceeds u.
  std::size_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cdf_[mid] <= u) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return static_cast<long long>(lo) - bound_;
}

long long sample_discrete_gaussian(double sigma, Rng& rng) {
  DiscreteGaussianSampler sampler(sigma);
  return sampler(rng);
}

}  // namespace dppp

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
// End-to-end acceptance gate. Each criterion prints exactly one PASS or
// FAIL line; the process exits nonzero if any criterion fails. Runs the
// real cryptography everywhere the criterion concerns the encrypted path.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dppp/audit.hpp"
#include "dppp/ensemble.hpp"
#include "dppp/errors.hpp"
#include "dppp/mechanisms.hpp"
#include "dppp/protocol.hpp"
#include "dppp/rng.hpp"
#include "dppp/threshold_paillier.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int g_failures = 0;

void report(int number, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", number,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(number, pass, name + ": " + detail);
  } catch (const std::exception& e) {
    report(number, false, name + ": exception: " + e.what());
  }
}

std::vector<dppp::VoteVector> random_votes(int n, int classes,
                                           dppp::Rng& rng) {
  std::vector<dppp::VoteVector> votes;
  for (int i = 0; i < n; ++i) {
    dppp::VoteVector v(static_cast<std::size_t>(classes), 0);
    v[dppp::uniform_index(rng, static_cast<std::size_t>(classes))] = 1;
    votes.push_back(std::move(v));
  }
  return votes;
}

std::pair<dppp::Dataset, dppp::Dataset> blob_split(std::uint64_t seed) {
  dppp::Dataset all = dppp::synth_blobs(420, 3, 2, 10.0, seed);
  dppp::Dataset train, test;
  train.class_count = test.class_count = 3;
  for (std::size_t i = 0; i < all.size(); ++i) {
    dppp::Dataset& dst = i < 300 ? train : test;
    dst.features.push_back(all.features[i]);
    dst.labels.push_back(all.labels[i]);
  }
  return {train, test};
}

// ---------------------------------------------------------------------

std::pair<bool, std::string> criterion_threshold_crypto() {
  auto start = Clock::now();
  dppp::Rng rng = dppp::make_rng(0xac5e);
  dppp::KeyMaterial key = dppp::deal_keys(1024, {5, 3}, rng);
  const dppp::PublicKey& pk = key.public_key;

  auto decrypt_with = [&](const dppp::Ciphertext& ct,
                          const std::vector<int>& holders) {
    std::vector<dppp::PartialDecryption> partials;
    for (int i : holders) {
      partials.push_back(dppp::partial_decrypt(
          pk, key.config, key.shares[static_cast<std::size_t>(i)], ct));
    }
    return dppp::combine(pk, key.config, partials);
  };

  // 100 random plaintexts round-trip through encrypt / partial / combine.
  for (int i = 0; i < 100; ++i) {
    dppp::Bigint m = dppp::random_below(rng, pk.n);
    dppp::Ciphertext ct = dppp::encrypt(pk, m, rng);
    if (decrypt_with(ct, {0, 1, 2}) != m) {
      return {false, "random roundtrip mismatch"};
    }
  }

  // Homomorphic 20-term sum matches the integer sum.
  dppp::Bigint expected = 0;
  dppp::Ciphertext acc = dppp::encrypt(pk, dppp::Bigint(0), rng);
  for (int i = 0; i < 20; ++i) {
    dppp::Bigint m = dppp::random_below(rng, dppp::Bigint(1) << 40);
    expected += m;
    acc = dppp::add(pk, acc, dppp::encrypt(pk, m, rng));
  }
  if (decrypt_with(acc, {1, 3, 4}) != expected) {
    return {false, "homomorphic sum mismatch"};
  }

  // Every 3-of-5 committee recovers the same plaintext.
  dppp::Bigint m = dppp::random_below(rng, pk.n);
  dppp::Ciphertext ct = dppp::encrypt(pk, m, rng);
  int subsets = 0;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) {
      for (int c = b + 1; c < 5; ++c) {
        if (decrypt_with(ct, {a, b, c}) != m) {
          return {false, "subset disagreement"};
        }
        ++subsets;
      }
    }
  }
  if (subsets != 10) return {false, "expected 10 subsets"};

  // Below-threshold and duplicate-share combinations are rejected.
  bool too_few_rejected = false;
  try {
    decrypt_with(ct, {0, 1});
  } catch (const dppp::InsufficientSharesError&) {
    too_few_rejected = true;
  }
  bool duplicates_rejected = false;
  try {
    decrypt_with(ct, {0, 1, 1});
  } catch (const dppp::DuplicateShareError&) {
    duplicates_rejected = true;
  }
  double elapsed = seconds_since(start);
  bool pass = too_few_rejected && duplicates_rejected && elapsed <= 60.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "1024-bit 3-of-5 roundtrips, sums and subsets in %.1fs "
                "(budget 60s)",
                elapsed);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_binomial_calibration() {
  auto start = Clock::now();
  int cells = 0;
  for (double eps : {0.1, 0.2, 0.5, 1.0, 2.0}) {
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      long long n = dppp::binomial_min_tosses(eps, delta);
      double actual = dppp::binomial_exact_delta(n, eps);
      double classical = 64.0 * std::log(2.0 / delta) / (eps * eps);
      if (actual > delta) {
        return {false, "exact delta exceeds the target"};
      }
      if (static_cast<double>(n) >= classical) {
        return {false, "no headroom over the classical toss count"};
      }
      ++cells;
    }
  }
  double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d grid cells: exact delta <= target and n below the "
                "classical budget in %.1fs (budget 120s)",
                cells, elapsed);
  return {elapsed <= 120.0, detail};
}

std::pair<bool, std::string> criterion_gaussian_calibration() {
  int cells = 0;
  for (double eps : {0.1, 0.2, 0.5, 1.0, 2.0}) {
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      double sigma = dppp::analytic_gaussian_sigma(eps, delta, 1.0);
      double residual =
          std::fabs(dppp::analytic_gaussian_delta(eps, sigma, 1.0) - delta);
      if (residual > 1e-9) {
        return {false, "calibration residual above 1e-9"};
      }
      double classical = std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
      if (eps <= 1.0 && sigma > classical) {
        return {false, "analytic sigma not below the classical sigma"};
      }
      ++cells;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d grid cells: residual <= 1e-9, sigma <= classical for "
                "eps <= 1",
                cells);
  return {true, detail};
}

std::pair<bool, std::string> criterion_convolution_audit() {
  // Exact self-convolution: three Binomial(4) variables sum to
  // Binomial(12).
  dppp::Pmf conv = dppp::convolve_pmf(dppp::binomial_pmf(4), 3);
  dppp::Pmf direct = dppp::binomial_pmf(12);
  if (conv.mass.size() != direct.mass.size() ||
      conv.min_value != direct.min_value) {
    return {false, "convolution support mismatch"};
  }
  long double worst = 0.0L;
  for (std::size_t i = 0; i < conv.mass.size(); ++i) {
    worst = std::max(worst, fabsl(conv.mass[i] - direct.mass[i]));
  }
  if (static_cast<double>(worst) > 1e-12) {
    return {false, "convolution error above 1e-12"};
  }

  // Summed per-party noise passes the plan target for every committee
  // size on both mechanisms at (eps=1, delta=1e-3).
  for (int h : {4, 9, 14, 20}) {
    dppp::PrivacyParams params{1.0, 1e-3, 1.0};
    dppp::BinomialPlan bm = dppp::binomial_plan(params, h);
    dppp::Pmf bm_sum = dppp::convolve_pmf(
        dppp::binomial_pmf(bm.m_per_party), bm.honest_count);
    if (dppp::hockey_stick_delta(bm_sum, 1.0) > 1e-3) {
      return {false, "pooled binomial plan misses the target"};
    }
    dppp::GaussianPlan dg = dppp::discrete_gaussian_plan(params, h, 1.0);
    dppp::Pmf dg_sum = dppp::convolve_pmf(
        dppp::discrete_gaussian_pmf(dg.sigma_per_party), dg.honest_count);
    if (dppp::hockey_stick_delta(dg_sum, 1.0) > 1e-3) {
      return {false, "pooled gaussian plan misses the target"};
    }
  }
  return {true,
          "exact 3-fold convolution within 1e-12; pooled plans for 4 to 20 "
          "parties meet (eps=1, delta=1e-3)"};
}

std::pair<bool, std::string> criterion_shadow_equivalence(
    const dppp::KeyMaterial& key20) {
  auto start = Clock::now();
  int runs = 0;
  for (dppp::Mechanism mech :
       {dppp::Mechanism::kBinomial, dppp::Mechanism::kDiscreteGaussian}) {
    dppp::NoisePlan plan =
        dppp::make_noise_plan(mech, dppp::PrivacyParams{1.0, 1e-3, 1.0}, 20);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      dppp::RunConfig config;
      config.n_teachers = 20;
      config.threshold = 13;
      config.class_count = 3;
      config.mechanism = mech;
      config.seed = seed * 101;

      dppp::Rng vote_rng = dppp::derive_rng(seed, 0x0e5);
      std::vector<dppp::VoteVector> votes = random_votes(20, 3, vote_rng);
      dppp::ProtocolResult run =
          dppp::run_protocol(config, votes, plan, key20);
      dppp::NoisyHistogram shadow =
          dppp::shadow_histogram(config, votes, plan);
      if (run.histogram.raw_counts != shadow.raw_counts ||
          run.histogram.offset != shadow.offset ||
          run.histogram.participants != shadow.participants) {
        return {false, "decrypted and shadow histograms differ"};
      }
      ++runs;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d encrypted runs reproduced bit-for-bit by the plaintext "
                "shadow in %.1fs",
                runs, seconds_since(start));
  return {true, detail};
}

std::pair<bool, std::string> criterion_dropout_and_collusion(
    const dppp::KeyMaterial& key20) {
  dppp::PrivacyParams params{1.0, 1e-3, 2.0 / 3.0};
  dppp::Rng vote_rng = dppp::make_rng(0xd0);
  std::vector<dppp::VoteVector> votes = random_votes(20, 3, vote_rng);

  dppp::RunConfig config;
  config.n_teachers = 20;
  config.threshold = 13;
  config.class_count = 3;
  config.privacy = params;
  config.seed = 555;

  // N - t = 7: six dropouts survive, seven abort.
  config.dropouts = {0, 3, 7, 11, 15, 19};
  dppp::NoisePlan bm_plan =
      dppp::make_noise_plan(dppp::Mechanism::kBinomial, params, 20);
  dppp::ProtocolResult run =
      dppp::run_protocol(config, votes, bm_plan, key20);
  if (run.histogram.participants != 14) {
    return {false, "wrong survivor count"};
  }
  dppp::NoisyHistogram shadow =
      dppp::shadow_histogram(config, votes, bm_plan);
  if (run.histogram.raw_counts != shadow.raw_counts) {
    return {false, "survivor-only histogram mismatch"};
  }

  config.dropouts = {0, 3, 7, 11, 15, 19, 2};
  bool aborted = false;
  try {
    dppp::run_protocol(config, votes, bm_plan, key20);
  } catch (const dppp::AbortInsufficientPartiesError&) {
    aborted = true;
  }
  if (!aborted) {
    return {false, "seven dropouts did not abort"};
  }

  // Six compromised parties (the floor(N/3) maximum) leave enough
  // honest noise under the gamma = 2/3 plans for both mechanisms.
  std::vector<int> compromised{1, 4, 6, 9, 13, 17};
  dppp::GaussianPlan dg_plan = dppp::discrete_gaussian_plan(params, 20, 1.0);
  if (!dppp::collusion_residual_check(bm_plan.binomial, 20, compromised)) {
    return {false, "binomial residual check failed"};
  }
  if (!dppp::collusion_residual_check(dg_plan, 20, compromised)) {
    return {false, "gaussian residual check failed"};
  }
  return {true,
          "six dropouts tolerated (survivor shadow matches), seven abort, "
          "six colluders leave sufficient residual noise"};
}

std::pair<bool, std::string> criterion_empirical_dp() {
  auto start = Clock::now();
  // Three teachers, two classes, per-party binomial shares calibrated at
  // (eps=1, delta=1e-3): m = 46 tosses each.
  dppp::PrivacyParams params{1.0, 1e-3, 1.0};
  dppp::BinomialPlan plan = dppp::binomial_plan(params, 3);
  if (plan.m_per_party != 46) {
    return {false, "unexpected per-party toss count"};
  }

  auto noisy = [&plan](const std::vector<std::vector<long long>>& votes,
                       dppp::Rng& rng) {
    long long counts[2] = {0, 0};
    for (const auto& v : votes) {
      counts[0] += v[0];
      counts[1] += v[1];
    }
    for (int j = 0; j < 2; ++j) {
      for (int party = 0; party < 3; ++party) {
        counts[j] += dppp::sample_binomial_share(plan.m_per_party, rng) -
                     plan.m_per_party / 2;
      }
    }
    return counts[1] > counts[0] ? 1 : 0;
  };
  auto noiseless = [](const std::vector<std::vector<long long>>& votes,
                      dppp::Rng&) {
    long long counts[2] = {0, 0};
    for (const auto& v : votes) {
      counts[0] += v[0];
      counts[1] += v[1];
    }
    return counts[1] > counts[0] ? 1 : 0;
  };

  std::vector<std::vector<long long>> a{{1, 0}, {0, 1}, {1, 0}};
  std::vector<std::vector<long long>> b{{1, 0}, {0, 1}, {0, 1}};

  dppp::DpAuditReport calibrated =
      dppp::empirical_dp_test(noisy, a, b, 2, 1.0, 1e-3, 1000000, 0xe9);
  if (!calibrated.pass) {
    return {false, "calibrated mechanism flagged as violating"};
  }

  std::vector<std::vector<long long>> a2{{1, 0}, {0, 1}};
  std::vector<std::vector<long long>> b2{{0, 1}, {0, 1}};
  dppp::DpAuditReport control =
      dppp::empirical_dp_test(noiseless, a2, b2, 2, 1.0, 1e-3, 100000, 0xe9);
  if (control.pass) {
    return {false, "noiseless control slipped through"};
  }

  double elapsed = seconds_since(start);
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "calibrated ensemble passes 1e6-trial histogram test "
                "(worst residual %.2e <= %.2e), noiseless control fails "
                "(%.2f), %.1fs (budget 300s)",
                calibrated.delta_actual, calibrated.delta_claimed,
                control.delta_actual, elapsed);
  return {elapsed <= 300.0, detail};
}

std::pair<bool, std::string> criterion_framework_comparison(
    const dppp::KeyMaterial& key20) {
  auto start = Clock::now();
  const int seeds = 20;
  dppp::PrivacyParams params{1.0, 1e-3, 1.0};
  double central = 0, dnp = 0, ldp = 0, alone = 0, bm = 0, dgm = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    auto [train, test] = blob_split(static_cast<std::uint64_t>(seed) + 1);
    auto run = [&](dppp::FrameworkKind kind, dppp::Mechanism mech,
                   const dppp::KeyMaterial* keys) {
      return dppp::run_framework(kind, train, test, params, 20,
                                 static_cast<std::uint64_t>(seed) + 1, mech,
                                 keys);
    };
    central += run(dppp::FrameworkKind::kCentralized,
                   dppp::Mechanism::kBinomial, nullptr);
    dnp += run(dppp::FrameworkKind::kDistributedNonPrivate,
               dppp::Mechanism::kBinomial, nullptr);
    ldp += run(dppp::FrameworkKind::kLocalDp, dppp::Mechanism::kBinomial,
               nullptr);
    alone += run(dppp::FrameworkKind::kStandalone,
                 dppp::Mechanism::kBinomial, nullptr);
    bm += run(dppp::FrameworkKind::kDppp, dppp::Mechanism::kBinomial,
              &key20);
    dgm += run(dppp::FrameworkKind::kDppp,
               dppp::Mechanism::kDiscreteGaussian, &key20);
  }
  central /= seeds;
  dnp /= seeds;
  ldp /= seeds;
  alone /= seeds;
  bm /= seeds;
  dgm /= seeds;

  double elapsed = seconds_since(start);
  bool pass = std::fabs(central - dnp) <= 0.05 && dnp >= bm &&
              dnp - bm <= 0.05 && bm > ldp && bm > alone &&
              dgm >= bm - 0.02 && elapsed <= 600.0;
  char detail[240];
  std::snprintf(
      detail, sizeof(detail),
      "20-seed means: central=%.3f dnp=%.3f dppp_bm=%.3f dppp_dgm=%.3f "
      "ldp=%.3f standalone=%.3f (encrypted runs, %.0fs, budget 600s)",
      central, dnp, bm, dgm, ldp, alone, elapsed);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_traffic() {
  if (dppp::estimate_traffic(2, 1024) != 1536 ||
      dppp::estimate_traffic(10, 1024) != 7680) {
    return {false, "traffic formula mismatch"};
  }

  // A real 1024-bit run: each selected teacher moves exactly
  // 768 bytes per class across its three messages.
  dppp::Rng rng = dppp::make_rng(0x7a);
  dppp::KeyMaterial key = dppp::deal_keys(1024, {5, 3}, rng);
  dppp::RunConfig config;
  config.n_teachers = 5;
  config.threshold = 3;
  config.class_count = 3;
  config.seed = 21;
  std::vector<dppp::VoteVector> votes = random_votes(5, 3, rng);
  dppp::ProtocolResult run =
      dppp::run_protocol(config, votes, dppp::zero_noise_plan(5), key);
  for (int d : run.decryptors) {
    if (run.transcript.bytes_for(d) != 768u * 3u) {
      return {false, "selected teacher traffic is not 768 bytes per class"};
    }
    if (run.transcript.bytes_for(d) != dppp::estimate_traffic(3, 1024)) {
      return {false, "transcript disagrees with the traffic estimate"};
    }
  }
  return {true,
          "1536 bytes for 2 classes, 7680 for 10; transcript shows 768 "
          "bytes per class for every selected teacher at 1024-bit keys"};
}

}  // namespace

int main() {
  std::printf("acceptance: exact privacy accounting, threshold decryption "
              "and framework comparisons\n");
  auto total_start = Clock::now();

  // One 512-bit 13-of-20 key shared by the protocol-heavy criteria.
  dppp::Rng key_rng = dppp::make_rng(0x20ac);
  dppp::KeyMaterial key20 = dppp::deal_keys(512, {20, 13}, key_rng);

  run_criterion(1, "threshold decryption", criterion_threshold_crypto);
  run_criterion(2, "binomial calibration", criterion_binomial_calibration);
  run_criterion(3, "gaussian calibration", criterion_gaussian_calibration);
  run_criterion(4, "convolution audit", criterion_convolution_audit);
  run_criterion(5, "shadow equivalence",
                [&] { return criterion_shadow_equivalence(key20); });
  run_criterion(6, "dropouts and collusion",
                [&] { return criterion_dropout_and_collusion(key20); });
  run_criterion(7, "empirical privacy", criterion_empirical_dp);
  run_criterion(8, "framework comparison",
                [&] { return criterion_framework_comparison(key20); });
  run_criterion(9, "traffic accounting", criterion_traffic);

  std::printf("acceptance: %d failure(s) in %.0fs\n", g_failures,
              seconds_since(total_start));
  return g_failures == 0 ? 0 : 1;
}

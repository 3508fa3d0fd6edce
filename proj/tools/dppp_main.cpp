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
// Command-line front end: key generation, noise calibration, protocol
// simulation, framework comparison sweeps, privacy audits and
// micro-benchmarks.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dppp/audit.hpp"
#include "dppp/ensemble.hpp"
#include "dppp/errors.hpp"
#include "dppp/mechanisms.hpp"
#include "dppp/protocol.hpp"
#include "dppp/rng.hpp"
#include "dppp/threshold_paillier.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// ---------------------------------------------------------------- keygen

int cmd_keygen(int key_bits, int n_parties, int threshold,
               const std::string& out_dir, bool force, std::uint64_t seed) {
  fs::path dir(out_dir);
  fs::create_directories(dir);
  fs::path pub_path = dir / "public.json";
  if (fs::exists(pub_path) && !force) {
    std::cerr << "refusing to overwrite " << pub_path.string()
              << " (use --force)\n";
    return 2;
  }

  dppp::Rng rng = dppp::make_rng(seed);
  dppp::KeyMaterial keys =
      dppp::deal_keys(key_bits, {n_parties, threshold}, rng);

  json pub = {
      {"key_bits", key_bits},
      {"n_parties", n_parties},
      {"threshold", threshold},
      {"n", dppp::to_hex(keys.public_key.n)},
  };
  std::ofstream(pub_path) << pub.dump(2) << "\n";
  for (const auto& share : keys.shares) {
    json body = {{"index", share.index},
                 {"value", dppp::to_hex(share.value)}};
    fs::path share_path =
        dir / ("share_" + std::to_string(share.index) + ".json");
    std::ofstream(share_path) << body.dump(2) << "\n";
  }
  std::cout << "wrote " << pub_path.string() << " and " << keys.shares.size()
            << " share files\n";
  return 0;
}

// ------------------------------------------------------------- calibrate

int cmd_calibrate(const std::string& mechanism, double epsilon, double delta,
                  double gamma, int n_teachers, bool as_json) {
  dppp::PrivacyParams params{epsilon, delta, gamma};
  dppp::Mechanism mech = dppp::mechanism_from_name(mechanism);
  json out = {{"mechanism", mechanism}, {"epsilon", epsilon},
              {"delta", delta},         {"gamma", gamma},
              {"teachers", n_teachers}};
  if (mech == dppp::Mechanism::kBinomial) {
    dppp::BinomialPlan plan = dppp::binomial_plan(params, n_teachers);
    out["n_total"] = plan.n_total;
    out["m_per_party"] = plan.m_per_party;
    out["honest_count"] = plan.honest_count;
    if (!as_json) {
      std::printf("binomial plan: n_total=%lld m_per_party=%lld honest=%d\n",
                  plan.n_total, plan.m_per_party, plan.honest_count);
      return 0;
    }
  } else {
    dppp::GaussianPlan plan =
        dppp::discrete_gaussian_plan(params, n_teachers, 1.0);
    double residual = std::fabs(
        dppp::analytic_gaussian_delta(epsilon, plan.sigma_total, 1.0) - delta);
    out["sigma_total"] = plan.sigma_total;
    out["sigma_per_party"] = plan.sigma_per_party;
    out["honest_count"] = plan.honest_count;
    out["truncation_bound"] = plan.truncation_bound;
    out["calibration_residual"] = residual;
    if (!as_json) {
      std::printf(
          "discrete gaussian plan: sigma_total=%.6f sigma_per_party=%.6f "
          "honest=%d truncation=%lld residual=%.3e\n",
          plan.sigma_total, plan.sigma_per_party, plan.honest_count,
          plan.truncation_bound, residual);
      return 0;
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(const std::string& config_path,
                 const std::string& transcript_path, int key_bits) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  dppp::RunConfig config = dppp::run_config_from_json(buffer.str());

  dppp::Rng key_rng = dppp::derive_rng(config.seed, 0x6b65, 0);
  dppp::KeyMaterial keys = dppp::deal_keys(
      key_bits, {config.n_teachers, config.threshold}, key_rng);
  dppp::NoisePlan plan =
      dppp::make_noise_plan(config.mechanism, config.privacy,
                            config.n_teachers);

  // Synthetic one-hot votes, seeded alongside the run.
  dppp::Rng vote_rng = dppp::derive_rng(config.seed, 0x7073, 1);
  std::vector<dppp::VoteVector> votes;
  for (int i = 0; i < config.n_teachers; ++i) {
    dppp::VoteVector vote(static_cast<std::size_t>(config.class_count), 0);
    vote[dppp::uniform_index(vote_rng,
                             static_cast<std::size_t>(config.class_count))] =
        1;
    votes.push_back(std::move(vote));
  }

  dppp::ProtocolResult result =
      dppp::run_protocol(config, votes, plan, keys);
  json hist = json::array();
  for (long long v : result.histogram.raw_counts) hist.push_back(v);
  json out = {
      {"raw_counts", hist},
      {"offset", result.histogram.offset},
      {"participants", result.histogram.participants},
      {"predicted", result.predicted},
      {"messages", result.transcript.message_count()},
      {"total_bytes", result.transcript.total_bytes()},
  };
  std::cout << out.dump(2) << "\n";

  if (!transcript_path.empty()) {
    std::ofstream tout(transcript_path);
    dppp::write_transcript_jsonl(result.transcript, tout);
  }
  return 0;
}

// --------------------------------------------------------------- compare

struct ExperimentSpec {
  std::string mechanism = "bm";
  std::vector<double> epsilons{0.01, 0.05, 0.1, 0.5, 1.0};
  std::vector<double> deltas{1e-3};
  double gamma = 1.0;
  int n_teachers = 20;
  int class_count = 3;
  std::string dataset = "synthetic";
  std::string label_column = "label";
  int samples = 420;
  int test_samples = 120;
  int seeds = 20;
  int key_bits = 512;
  bool plaintext_shadow = false;
  std::string csv_path = "compare.csv";
};

void split_dataset(const dppp::Dataset& all, std::size_t test_count,
                   dppp::Dataset* train, dppp::Dataset* test) {
  if (test_count == 0 || test_count >= all.size()) {
    throw dppp::InvalidArgumentError("bad train/test split");
  }
  std::size_t train_count = all.size() - test_count;
  train->class_count = test->class_count = all.class_count;
  for (std::size_t i = 0; i < all.size(); ++i) {
    dppp::Dataset* dst = i < train_count ? train : test;
    dst->features.push_back(all.features[i]);
    dst->labels.push_back(all.labels[i]);
  }
}

int cmd_compare(const ExperimentSpec& spec) {
  if (spec.epsilons.empty() || spec.deltas.empty() || spec.seeds < 1) {
    throw dppp::InvalidArgumentError("grids and seeds must be non-empty");
  }
  dppp::Mechanism mech = dppp::mechanism_from_name(spec.mechanism);

  dppp::KeyMaterial keys;
  const dppp::KeyMaterial* keys_ptr = nullptr;
  if (!spec.plaintext_shadow) {
    int threshold = std::max(2, 2 * spec.n_teachers / 3);
    dppp::Rng key_rng = dppp::derive_rng(0x5eed, 0x6b65);
    keys = dppp::deal_keys(spec.key_bits, {spec.n_teachers, threshold},
                           key_rng);
    keys_ptr = &keys;
  }

  std::ofstream csv(spec.csv_path);
  if (!csv) {
    std::cerr << "cannot write " << spec.csv_path << "\n";
    return 2;
  }
  csv << "framework,mechanism,epsilon,delta,gamma,n_teachers,seed,accuracy\n";

  const std::vector<dppp::FrameworkKind> kinds = {
      dppp::FrameworkKind::kCentralized,
      dppp::FrameworkKind::kDistributedNonPrivate,
      dppp::FrameworkKind::kLocalDp,
      dppp::FrameworkKind::kStandalone,
      dppp::FrameworkKind::kPate,
      dppp::FrameworkKind::kDppp,
  };

  for (double delta : spec.deltas) {
    for (double eps : spec.epsilons) {
      for (int seed = 0; seed < spec.seeds; ++seed) {
        dppp::Dataset train, test;
        if (spec.dataset == "synthetic") {
          dppp::Dataset all = dppp::synth_blobs(
              spec.samples, spec.class_count, 2, 10.0,
              static_cast<std::uint64_t>(seed) + 1);
          split_dataset(all, static_cast<std::size_t>(spec.test_samples),
                        &train, &test);
        } else {
          dppp::Dataset all =
              dppp::load_csv(spec.dataset, spec.label_column);
          // Per-seed random split, one quarter held out.
          dppp::Rng rng =
              dppp::derive_rng(static_cast<std::uint64_t>(seed), 0x5717);
          std::vector<std::size_t> order(all.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          dppp::shuffle_indices(order, rng);
          dppp::Dataset shuffled;
          shuffled.class_count = all.class_count;
          for (std::size_t i : order) {
            shuffled.features.push_back(all.features[i]);
            shuffled.labels.push_back(all.labels[i]);
          }
          split_dataset(shuffled, std::max<std::size_t>(1, all.size() / 4),
                        &train, &test);
        }

        dppp::PrivacyParams params{eps, delta, spec.gamma};
        for (dppp::FrameworkKind kind : kinds) {
          double acc = dppp::run_framework(
              kind, train, test, params, spec.n_teachers,
              static_cast<std::uint64_t>(seed) + 1, mech,
              kind == dppp::FrameworkKind::kDppp ? keys_ptr : nullptr);
          std::string mech_col;
          switch (kind) {
            case dppp::FrameworkKind::kCentralized:
            case dppp::FrameworkKind::kDistributedNonPrivate:
              mech_col = "none";
              break;
            case dppp::FrameworkKind::kPate:
              mech_col = "laplace";
              break;
            default:
              mech_col = spec.mechanism;
          }
          char line[256];
          std::snprintf(line, sizeof(line), "%s,%s,%g,%g,%g,%d,%d,%.6f\n",
                        dppp::framework_name(kind).c_str(), mech_col.c_str(),
                        eps, delta, spec.gamma, spec.n_teachers, seed, acc);
          csv << line;
        }
      }
    }
  }
  std::cout << "wrote " << spec.csv_path << "\n";
  return 0;
}

// ----------------------------------------------------------------- audit

int cmd_audit(const std::string& mechanism, double epsilon, double delta,
              double gamma, int n_teachers) {
  int failures = 0;
  auto row = [&failures](bool pass, const std::string& text) {
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", text.c_str());
    if (!pass) ++failures;
  };

  const std::vector<double> eps_grid = {0.1, 0.2, 0.5, 1.0, 2.0};
  const std::vector<double> delta_grid = {1e-2, 1e-3, 1e-4};

  // Binomial toss bound: exact delta at the calibrated n, plus headroom
  // against the classical 64 ln(2/delta)/eps^2 requirement.
  for (double eps : eps_grid) {
    for (double del : delta_grid) {
      long long n = dppp::binomial_min_tosses(eps, del);
      long long n_classical = static_cast<long long>(
          std::ceil(64.0 * std::log(2.0 / del) / (eps * eps)));
      double actual = dppp::binomial_exact_delta(n, eps);
      char text[160];
      std::snprintf(text, sizeof(text),
                    "binomial eps=%.2f delta=%.0e n=%lld (classical %lld) "
                    "delta_actual=%.3e",
                    eps, del, n, n_classical, actual);
      row(actual <= del && n < n_classical, text);
    }
  }

  // Gaussian calibration residual and comparison to the classical sigma.
  for (double eps : eps_grid) {
    for (double del : delta_grid) {
      double sigma = dppp::analytic_gaussian_sigma(eps, del, 1.0);
      double residual =
          std::fabs(dppp::analytic_gaussian_delta(eps, sigma, 1.0) - del);
      double classical = std::sqrt(2.0 * std::log(1.25 / del)) / eps;
      bool ok = residual <= 1e-9 && (eps > 1.0 || sigma <= classical);
      char text[160];
      std::snprintf(text, sizeof(text),
                    "gaussian eps=%.2f delta=%.0e sigma=%.4f "
                    "(classical %.4f) residual=%.3e",
                    eps, del, sigma, classical, residual);
      row(ok, text);
    }
  }

  // Distributed plan sufficiency: the honest parties' summed noise must
  // itself pass the hockey-stick audit at the plan's (eps, delta).
  dppp::PrivacyParams params{epsilon, delta, gamma};
  dppp::Mechanism mech = dppp::mechanism_from_name(mechanism);
  double conv_delta = 0.0;
  int honest = 0;
  if (mech == dppp::Mechanism::kBinomial) {
    dppp::BinomialPlan plan = dppp::binomial_plan(params, n_teachers);
    honest = plan.honest_count;
    dppp::Pmf share = dppp::binomial_pmf(plan.m_per_party);
    dppp::Pmf sum = dppp::convolve_pmf(share, plan.honest_count);
    conv_delta = dppp::hockey_stick_delta(sum, epsilon);
  } else {
    dppp::GaussianPlan plan =
        dppp::discrete_gaussian_plan(params, n_teachers, 1.0);
    honest = plan.honest_count;
    dppp::Pmf share = dppp::discrete_gaussian_pmf(plan.sigma_per_party);
    dppp::Pmf sum = dppp::convolve_pmf(share, plan.honest_count);
    conv_delta = dppp::hockey_stick_delta(sum, epsilon);
  }
  char text[160];
  std::snprintf(text, sizeof(text),
                "plan sufficiency %s eps=%.2f delta=%.0e N=%d honest=%d "
                "summed delta_actual=%.3e",
                mechanism.c_str(), epsilon, delta, n_teachers, honest,
                conv_delta);
  row(conv_delta <= delta, text);

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- bench

int cmd_bench(const std::vector<int>& teacher_counts, int class_count,
              int key_bits, std::uint64_t seed) {
  std::printf("%8s %6s %12s %12s %12s %16s\n", "N", "t", "encrypt_ms",
              "partial_ms", "combine_ms", "teacher_bytes");
  for (int n : teacher_counts) {
    int threshold = std::max(2, 2 * n / 3);
    dppp::Rng rng = dppp::make_rng(seed + static_cast<std::uint64_t>(n));
    dppp::KeyMaterial keys = dppp::deal_keys(key_bits, {n, threshold}, rng);
    const dppp::PublicKey& pk = keys.public_key;

    const int reps = 15;
    std::vector<double> enc_times, part_times, comb_times;
    for (int r = 0; r < reps; ++r) {
      dppp::Bigint m = dppp::random_below(rng, pk.n);
      auto t0 = std::chrono::steady_clock::now();
      dppp::Ciphertext ct = dppp::encrypt(pk, m, rng);
      enc_times.push_back(elapsed_ms(t0));

      t0 = std::chrono::steady_clock::now();
      dppp::PartialDecryption pd =
          dppp::partial_decrypt(pk, keys.config, keys.shares[0], ct);
      part_times.push_back(elapsed_ms(t0));
      (void)pd;

      std::vector<dppp::PartialDecryption> partials;
      for (int i = 0; i < threshold; ++i) {
        partials.push_back(dppp::partial_decrypt(
            pk, keys.config, keys.shares[static_cast<std::size_t>(i)], ct));
      }
      t0 = std::chrono::steady_clock::now();
      dppp::Bigint back = dppp::combine(pk, keys.config, partials);
      comb_times.push_back(elapsed_ms(t0));
      if (back != m) {
        std::cerr << "combine mismatch during bench\n";
        return 1;
      }
    }
    auto median = [](std::vector<double>& v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    std::printf("%8d %6d %12.3f %12.3f %12.3f %16zu\n", n, threshold,
                median(enc_times), median(part_times), median(comb_times),
                dppp::estimate_traffic(class_count, key_bits));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed privacy-preserving prediction toolkit"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "deal threshold key shares");
  int kg_bits = 1024, kg_n = 5, kg_t = 3;
  std::string kg_dir = "keys";
  bool kg_force = false;
  std::uint64_t kg_seed = entropy_seed();
  keygen->add_option("--key-bits", kg_bits, "modulus size in bits");
  keygen->add_option("--teachers", kg_n, "number of share holders");
  keygen->add_option("--threshold", kg_t, "shares needed to decrypt");
  keygen->add_option("--out-dir", kg_dir, "output directory");
  keygen->add_flag("--force", kg_force, "overwrite existing key files");
  keygen->add_option("--seed", kg_seed, "deterministic key generation seed");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "print a noise plan");
  std::string cal_mech = "bm";
  double cal_eps = 1.0, cal_delta = 1e-3, cal_gamma = 1.0;
  int cal_teachers = 20;
  bool cal_json = false;
  calibrate->add_option("--mechanism", cal_mech, "bm or dgm");
  calibrate->add_option("--epsilon", cal_eps, "privacy budget");
  calibrate->add_option("--delta", cal_delta, "privacy slack");
  calibrate->add_option("--gamma", cal_gamma, "honest fraction");
  calibrate->add_option("--teachers", cal_teachers, "ensemble size");
  calibrate->add_flag("--json", cal_json, "emit JSON");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one protocol round");
  std::string sim_config, sim_transcript;
  int sim_bits = 512;
  simulate->add_option("--config", sim_config, "run config JSON file")
      ->required();
  simulate->add_option("--transcript", sim_transcript,
                       "write transcript JSON lines here");
  simulate->add_option("--key-bits", sim_bits, "modulus size in bits");

  // compare
  auto* compare = app.add_subcommand("compare", "framework accuracy sweep");
  ExperimentSpec spec;
  compare->add_option("--mechanism", spec.mechanism, "bm or dgm");
  compare->add_option("--epsilon", spec.epsilons, "epsilon grid");
  compare->add_option("--delta", spec.deltas, "delta grid");
  compare->add_option("--gamma", spec.gamma, "honest fraction");
  compare->add_option("--teachers", spec.n_teachers, "ensemble size");
  compare->add_option("--classes", spec.class_count, "synthetic class count");
  compare->add_option("--dataset", spec.dataset,
                      "'synthetic' or a CSV file path");
  compare->add_option("--label-column", spec.label_column,
                      "label column name for CSV datasets");
  compare->add_option("--samples", spec.samples, "synthetic sample count");
  compare->add_option("--test-samples", spec.test_samples,
                      "held-out sample count");
  compare->add_option("--seeds", spec.seeds, "number of repetitions");
  compare->add_option("--key-bits", spec.key_bits, "modulus size in bits");
  compare->add_flag("--plaintext-shadow", spec.plaintext_shadow,
                    "skip encryption (certified-equivalent fast path)");
  compare->add_option("--csv", spec.csv_path, "output CSV path");

  // audit
  auto* audit = app.add_subcommand("audit", "privacy certification table");
  std::string aud_mech = "bm";
  double aud_eps = 1.0, aud_delta = 1e-3, aud_gamma = 1.0;
  int aud_teachers = 20;
  audit->add_option("--mechanism", aud_mech,
                    "plan mechanism for the sufficiency check");
  audit->add_option("--epsilon", aud_eps, "plan epsilon");
  audit->add_option("--delta", aud_delta, "plan delta");
  audit->add_option("--gamma", aud_gamma, "plan honest fraction");
  audit->add_option("--teachers", aud_teachers, "plan ensemble size");

  // bench
  auto* bench = app.add_subcommand("bench", "crypto timing and traffic");
  std::vector<int> bn_teachers{5};
  int bn_classes = 2, bn_bits = 1024;
  std::uint64_t bn_seed = 7;
  bench->add_option("--teachers", bn_teachers, "ensemble sizes to measure");
  bench->add_option("--classes", bn_classes, "class count for traffic");
  bench->add_option("--key-bits", bn_bits, "modulus size in bits");
  bench->add_option("--seed", bn_seed, "benchmark key seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen->parsed()) {
      return cmd_keygen(kg_bits, kg_n, kg_t, kg_dir, kg_force, kg_seed);
    }
    if (calibrate->parsed()) {
      return cmd_calibrate(cal_mech, cal_eps, cal_delta, cal_gamma,
                           cal_teachers, cal_json);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_config, sim_transcript, sim_bits);
    }
    if (compare->parsed()) {
      return cmd_compare(spec);
    }
    if (audit->parsed()) {
      return cmd_audit(aud_mech, aud_eps, aud_delta, aud_gamma, aud_teachers);
    }
    if (bench->parsed()) {
      return cmd_bench(bn_teachers, bn_classes, bn_bits, bn_seed);
    }
  } catch (const dppp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

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
// Desk-scale teacher ensembles over synthetic or CSV datasets, and the
// accuracy comparison across aggregation frameworks. Local models are
// nearest-centroid classifiers: deterministic, dependency-free, and good
// enough on well-separated data to exercise the private aggregation
// pipeline; richer models can be swapped in behind the same vote interface.

#ifndef DPPP_ENSEMBLE_HPP_
#define DPPP_ENSEMBLE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dppp/mechanisms.hpp"
#include "dppp/protocol.hpp"
#include "dppp/rng.hpp"
#include "dppp/threshold_paillier.hpp"

namespace dppp {

struct Dataset {
  std::vector<std::vector<double>> features;  // rows = examples
  std::vector<int> labels;                    // values in [0, class_count)
  int class_count = 0;

  std::size_t size() const { return labels.size(); }
  void validate() const;
};

struct LocalModel {
  std::vector<std::vector<double>> centroids;  // per class mean, c rows
  std::vector<bool> has_class;  // classes absent from the subset cannot win
  int class_count = 0;
};

enum class FrameworkKind {
  kCentralized,            // one model on the pooled training data
  kDistributedNonPrivate,  // noiseless plaintext vote aggregation
  kLocalDp,                // full calibrated noise added by every teacher
  kStandalone,             // a single teacher answers, with full noise
  kPate,                   // trusted aggregator adds Laplace(2/eps)
  kDppp,                   // the encrypted distributed-noise protocol
};

std::string framework_name(FrameworkKind kind);

// Randomly deals examples into n_parts disjoint subsets whose sizes differ
// by at most one.
std::vector<Dataset> partition(const Dataset& data, int n_parts, Rng& rng);

// Per-class mean feature vectors; absent classes are marked unvotable.
LocalModel train_local(const Dataset& subset);

// One-hot vote for the nearest centroid (Euclidean); ties go to the lowest
// class index.
VoteVector predict_onehot(const LocalModel& model,
                          const std::vector<double>& x);

// c Gaussian clusters with unit within-class spread, centers pairwise at
// least `separation` apart, labels balanced, deterministic per seed.
Dataset synth_blobs(int n_samples, int class_count, int dims,
                    double separation, std::uint64_t seed);

// Numeric CSV with a header row; the label column may hold arbitrary
// strings, mapped to dense indices in first-appearance order. When
// label_names is non-null it receives that mapping.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 std::vector<std::string>* label_names = nullptr);

// The shared first stage of every distributed framework: partition the
// training data and fit one local model per teacher.
std::vector<LocalModel> train_teachers(const Dataset& train, int n_teachers,
                                       std::uint64_t seed);

std::vector<VoteVector> collect_votes(const std::vector<LocalModel>& models,
                                      const std::vector<double>& x);

// Test-set accuracy of the given framework. For kDppp, `keys` selects the
// execution path: with key material the full encrypted protocol runs per
// query; without it the plaintext shadow (bit-for-bit identical histogram,
// see shadow_histogram) is used, which is the fast path for sweeps.
// `mechanism` picks the noise family for kLocalDp, kStandalone and kDppp.
double run_framework(FrameworkKind kind, const Dataset& train,
                     const Dataset& test, const PrivacyParams& params,
                     int n_teachers, std::uint64_t seed,
                     Mechanism mechanism = Mechanism::kBinomial,
                     const KeyMaterial* keys = nullptr);

}  // namespace dppp

#endif  // DPPP_ENSEMBLE_HPP_

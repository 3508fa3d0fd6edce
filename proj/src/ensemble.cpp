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

#include "dppp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dppp/errors.hpp"

namespace dppp {
namespace {

constexpr std::uint64_t kBlobStream = 0xb10b0001;
constexpr std::uint64_t kPartitionStream = 0x9a270002;
constexpr std::uint64_t kLocalDpStream = 0x1d900003;
constexpr std::uint64_t kStandaloneStream = 0x57a40004;
constexpr std::uint64_t kPateStream = 0x9a7e0005;
constexpr std::uint64_t kQueryStream = 0xd9990006;

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d2 += diff * diff;
  }
  return d2;
}

template <typename T>
int argmax_lowest(const std::vector<T>& values) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return static_cast<int>(best);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    std::size_t first = cell.find_first_not_of(" \t\r");
    std::size_t last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos
                        ? std::string()
                        : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back(std::string());
  return cells;
}

}  // namespace

void Dataset::validate() const {
  if (features.size() != labels.size()) {
    throw InvalidArgumentError("feature rows and labels differ in count");
  }
  if (class_count < 1) {
    throw InvalidArgumentError("dataset needs a positive class count");
  }
  std::size_t dims = features.empty() ? 0 : features.front().size();
  for (const auto& row : features) {
    if (row.size() != dims) {
      throw InvalidArgumentError("feature rows have inconsistent widths");
    }
  }
  for (int label : labels) {
    if (label < 0 || label >= class_count) {
      throw InvalidArgumentError("label outside [0, class_count)");
    }
  }
}

std::string framework_name(FrameworkKind kind) {
  switch (kind) {
    case FrameworkKind::kCentralized:
      return "centralized";
    case FrameworkKind::kDistributedNonPrivate:
      return "distributed_non_private";
    case FrameworkKind::kLocalDp:
      return "ldp";
    case FrameworkKind::kStandalone:
      return "standalone";
    case FrameworkKind::kPate:
      return "pate";
    case FrameworkKind::kDppp:
      return "dppp";
  }
  return "unknown";
}

std::vector<Dataset> partition(const Dataset& data, int n_parts, Rng& rng) {
  data.validate();
  if (n_parts < 1) {
    throw InvalidArgumentError("need at least one part");
  }
  if (static_cast<std::size_t>(n_parts) > data.size()) {
    throw InvalidArgumentError("more parts than examples");
  }
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_indices(order, rng);

  std::vector<Dataset> parts(static_cast<std::size_t>(n_parts));
  for (auto& part : parts) part.class_count = data.class_count;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Dataset& part = parts[i % static_cast<std::size_t>(n_parts)];
    part.features.push_back(data.features[order[i]]);
    part.labels.push_back(data.labels[order[i]]);
  }
  return parts;
}

LocalModel train_local(const Dataset& subset) {
  subset.validate();
  if (subset.size() == 0) {
    throw InvalidArgumentError("cannot train on an empty subset");
  }
  std::size_t dims = subset.features.front().size();
  LocalModel model;
  model.class_count = subset.class_count;
  model.centroids.assign(static_cast<std::size_t>(subset.class_count),
                         std::vector<double>(dims, 0.0));
  model.has_class.assign(static_cast<std::size_t>(subset.class_count), false);
  std::vector<std::size_t> counts(static_cast<std::size_t>(subset.class_count),
                                  0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    auto label = static_cast<std::size_t>(subset.labels[i]);
    ++counts[label];
    for (std::size_t k = 0; k < dims; ++k) {
      model.centroids[label][k] += subset.features[i][k];
    }
  }
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    model.has_class[j] = true;
    for (double& v : model.centroids[j]) {
      v /= static_cast<double>(counts[j]);
    }
  }
  return model;
}

VoteVector predict_onehot(const LocalModel& model,
                          const std::vector<double>& x) {
  int best = -1;
  double best_d2 = 0.0;
  for (int j = 0; j < model.class_count; ++j) {
    if (!model.has_class[static_cast<std::size_t>(j)]) continue;
    const auto& centroid = model.centroids[static_cast<std::size_t>(j)];
    if (centroid.size() != x.size()) {
      throw InvalidArgumentError("feature dimension mismatch");
    }
    double d2 = squared_distance(x, centroid);
    if (best < 0 || d2 < best_d2) {
      best = j;
      best_d2 = d2;
    }
  }
  if (best < 0) {
    throw InvalidArgumentError("model has no trained classes");
  }
  VoteVector vote(static_cast<std::size_t>(model.class_count), 0);
  vote[static_cast<std::size_t>(best)] = 1;
  return vote;
}

Dataset synth_blobs(int n_samples, int class_count, int dims,
                    double separation, std::uint64_t seed) {
  if (n_samples < 1 || class_count < 1 || dims < 1 || !(separation > 0.0)) {
    throw InvalidArgumentError("blob parameters must all be positive");
  }
  Rng rng = derive_rng(seed, kBlobStream);
  double box = separation * std::max(2.0, static_cast<double>(class_count));

  // Rejection-sample the cluster centers as a set until all pairwise
  // distances clear the separation.
  std::vector<std::vector<double>> centers;
  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    centers.assign(static_cast<std::size_t>(class_count),
                   std::vector<double>(static_cast<std::size_t>(dims)));
    for (auto& center : centers) {
      for (double& v : center) v = canonical(rng) * box;
    }
    placed = true;
    for (std::size_t a = 0; a < centers.size() && placed; ++a) {
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        if (squared_distance(centers[a], centers[b]) <
            separation * separation) {
          placed = false;
          break;
        }
      }
    }
  }
  if (!placed) {
    throw Error("could not place cluster centers; lower the separation");
  }

  Dataset data;
  data.class_count = class_count;
  data.features.reserve(static_cast<std::size_t>(n_samples));
  data.labels.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    int label = i % class_count;
    std::vector<double> row(static_cast<std::size_t>(dims));
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] = centers[static_cast<std::size_t>(label)][k] +
               standard_normal(rng);
    }
    data.features.push_back(std::move(row));
    data.labels.push_back(label);
  }
  return data;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 std::vector<std::string>* label_names) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) {
    throw ParseError(path + ": file is empty");
  }
  std::vector<std::string> header = split_csv_line(lines.front());
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) {
      label_idx = i;
      break;
    }
  }
  if (label_idx == header.size()) {
    throw ParseError(path + ": label column '" + label_column +
                     "' not found");
  }
  if (lines.size() < 2) {
    throw ParseError(path + ": no data rows");
  }

  Dataset data;
  std::vector<std::string> names;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<std::string> cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      throw ParseError(path + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    }
    std::vector<double> row;
    row.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) continue;
      try {
        std::size_t used = 0;
        double v = std::stod(cells[c], &used);
        if (used != cells[c].size()) {
          throw std::invalid_argument("trailing characters");
        }
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(path + ": row " + std::to_string(r + 1) +
                         ", column '" + header[c] + "': non-numeric value '" +
                         cells[c] + "'");
      }
    }
    const std::string& label = cells[label_idx];
    auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) {
      names.push_back(label);
      it = std::prev(names.end());
    }
    data.labels.push_back(static_cast<int>(it - names.begin()));
    data.features.push_back(std::move(row));
  }
  data.class_count = static_cast<int>(names.size());
  if (label_names != nullptr) *label_names = names;
  data.validate();
  return data;
}

std::vector<LocalModel> train_teachers(const Dataset& train, int n_teachers,
                                       std::uint64_t seed) {
  Rng rng = derive_rng(seed, kPartitionStream);
  std::vector<Dataset> parts = partition(train, n_teachers, rng);
  std::vector<LocalModel> models;
  models.reserve(parts.size());
  for (const auto& part : parts) {
    models.push_back(train_local(part));
  }
  return models;
}

std::vector<VoteVector> collect_votes(const std::vector<LocalModel>& models,
                                      const std::vector<double>& x) {
  std::vector<VoteVector> votes;
  votes.reserve(models.size());
  for (const auto& model : models) {
    votes.push_back(predict_onehot(model, x));
  }
  return votes;
}

double run_framework(FrameworkKind kind, const Dataset& train,
                     const Dataset& test, const PrivacyParams& params,
                     int n_teachers, std::uint64_t seed, Mechanism mechanism,
                     const KeyMaterial* keys) {
  train.validate();
  test.validate();
  params.validate();
  if (test.size() == 0) {
    throw InvalidArgumentError("empty test set");
  }
  if (train.class_count != test.class_count) {
    throw InvalidArgumentError("train/test class counts differ");
  }
  int c = train.class_count;

  if (kind == FrameworkKind::kCentralized) {
    LocalModel model = train_local(train);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (argmax_lowest(predict_onehot(model, test.features[i])) ==
          test.labels[i]) {
        ++correct;
      }
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
  }

  std::vector<LocalModel> models = train_teachers(train, n_teachers, seed);

  switch (kind) {
    case FrameworkKind::kDistributedNonPrivate: {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<long long> hist(static_cast<std::size_t>(c), 0);
        for (const auto& model : models) {
          VoteVector vote = predict_onehot(model, test.features[i]);
          for (int j = 0; j < c; ++j) {
            hist[static_cast<std::size_t>(j)] +=
                vote[static_cast<std::size_t>(j)];
          }
        }
        if (argmax_lowest(hist) == test.labels[i]) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(test.size());
    }

    case FrameworkKind::kLocalDp: {
      // Every teacher adds the full aggregate-level noise (the one-party
      // plan) to its own vote before plaintext summation.
      NoisePlan full = make_noise_plan(mechanism, params, 1);
      long long half_m = full.binomial.m_per_party / 2;
      Rng rng = derive_rng(seed, kLocalDpStream);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<long long> hist(static_cast<std::size_t>(c), 0);
        for (const auto& model : models) {
          VoteVector vote = predict_onehot(model, test.features[i]);
          std::vector<long long> noise = draw_noise(full, c, rng);
          for (int j = 0; j < c; ++j) {
            long long centered =
                mechanism == Mechanism::kBinomial
                    ? noise[static_cast<std::size_t>(j)] - half_m
                    : noise[static_cast<std::size_t>(j)];
            hist[static_cast<std::size_t>(j)] +=
                vote[static_cast<std::size_t>(j)] + centered;
          }
        }
        if (argmax_lowest(hist) == test.labels[i]) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(test.size());
    }

    case FrameworkKind::kStandalone: {
      // One teacher answers alone with full noise; accuracy is averaged
      // over every choice of teacher.
      NoisePlan full = make_noise_plan(mechanism, params, 1);
      long long half_m = full.binomial.m_per_party / 2;
      Rng rng = derive_rng(seed, kStandaloneStream);
      std::size_t correct = 0;
      for (const auto& model : models) {
        for (std::size_t i = 0; i < test.size(); ++i) {
          VoteVector vote = predict_onehot(model, test.features[i]);
          std::vector<long long> noisy(static_cast<std::size_t>(c), 0);
          std::vector<long long> noise = draw_noise(full, c, rng);
          for (int j = 0; j < c; ++j) {
            long long centered =
                mechanism == Mechanism::kBinomial
                    ? noise[static_cast<std::size_t>(j)] - half_m
                    : noise[static_cast<std::size_t>(j)];
            noisy[static_cast<std::size_t>(j)] =
                vote[static_cast<std::size_t>(j)] + centered;
          }
          if (argmax_lowest(noisy) == test.labels[i]) ++correct;
        }
      }
      return static_cast<double>(correct) /
             static_cast<double>(test.size() * models.size());
    }

    case FrameworkKind::kPate: {
      // One record moves one teacher's vote across two classes: L1
      // sensitivity 2, hence Laplace scale 2/eps per class.
      double scale = 2.0 / params.epsilon;
      Rng rng = derive_rng(seed, kPateStream);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<double> hist(static_cast<std::size_t>(c), 0.0);
        for (const auto& model : models) {
          VoteVector vote = predict_onehot(model, test.features[i]);
          for (int j = 0; j < c; ++j) {
            hist[static_cast<std::size_t>(j)] +=
                static_cast<double>(vote[static_cast<std::size_t>(j)]);
          }
        }
        for (int j = 0; j < c; ++j) {
          hist[static_cast<std::size_t>(j)] += laplace(rng, scale);
        }
        if (argmax_lowest(hist) == test.labels[i]) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(test.size());
    }

    case FrameworkKind::kDppp: {
      if (n_teachers < 3) {
        throw InvalidArgumentError(
            "the encrypted protocol needs at least 3 teachers");
      }
      NoisePlan plan = make_noise_plan(mechanism, params, n_teachers);
      RunConfig config;
      config.n_teachers = n_teachers;
      config.threshold = std::max(2, 2 * n_teachers / 3);
      config.class_count = c;
      config.mechanism = mechanism;
      config.privacy = params;
      std::size_t correct = 0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<VoteVector> votes = collect_votes(models, test.features[i]);
        config.seed = mix64(mix64(seed) ^ (kQueryStream + i));
        NoisyHistogram hist =
            keys != nullptr
                ? run_protocol(config, votes, plan, *keys).histogram
                : shadow_histogram(config, votes, plan);
        if (predict(hist) == test.labels[i]) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(test.size());
    }

    case FrameworkKind::kCentralized:
      break;  // handled above
  }
  throw InvalidArgumentError("unknown framework kind");
}

}  // namespace dppp

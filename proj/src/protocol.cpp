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

#include "dppp/protocol.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <json.hpp>

#include "dppp/errors.hpp"

namespace dppp {
namespace {

// Stream tags for deriving per-component randomness from the run seed.
constexpr std::uint64_t kTeacherStream = 0x7e9c4e01;
constexpr std::uint64_t kSelectStream = 0x5e1ec702;

void check_vote(const VoteVector& vote, int class_count) {
  if (static_cast<int>(vote.size()) != class_count) {
    throw InvalidArgumentError("vote vector has wrong class count");
  }
  long long total = 0;
  for (long long v : vote) {
    if (v != 0 && v != 1) {
      throw InvalidArgumentError("vote entries must be 0 or 1");
    }
    total += v;
  }
  if (total != 1) {
    throw InvalidArgumentError("vote must be one-hot (sum to 1)");
  }
}

void check_party_set(const std::vector<int>& ids, int n_teachers,
                     const char* what) {
  std::set<int> seen;
  for (int id : ids) {
    if (id < 0 || id >= n_teachers) {
      throw InvalidArgumentError(std::string(what) + " index out of range");
    }
    if (!seen.insert(id).second) {
      throw InvalidArgumentError(std::string(what) + " index repeated");
    }
  }
}

const char* kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kEncryptedVote:
      return "encrypted_vote";
    case MessageKind::kAggregateBroadcast:
      return "aggregate_broadcast";
    case MessageKind::kPartialDecryption:
      return "partial_decryption";
    case MessageKind::kCompromisedNoiseReveal:
      return "compromised_noise_reveal";
  }
  return "unknown";
}

}  // namespace

std::string mechanism_name(Mechanism mechanism) {
  return mechanism == Mechanism::kBinomial ? "bm" : "dgm";
}

Mechanism mechanism_from_name(const std::string& name) {
  if (name == "bm") return Mechanism::kBinomial;
  if (name == "dgm") return Mechanism::kDiscreteGaussian;
  throw InvalidArgumentError("unknown mechanism '" + name +
                             "' (expected bm or dgm)");
}

NoisePlan make_noise_plan(Mechanism mechanism, const PrivacyParams& params,
                          int n_parties, double sensitivity) {
  NoisePlan plan;
  plan.mechanism = mechanism;
  if (mechanism == Mechanism::kBinomial) {
    plan.binomial = binomial_plan(params, n_parties);
  } else {
    plan.gaussian = discrete_gaussian_plan(params, n_parties, sensitivity);
  }
  return plan;
}

NoisePlan zero_noise_plan(int n_parties) {
  NoisePlan plan;
  plan.mechanism = Mechanism::kBinomial;
  plan.binomial.n_total = 0;
  plan.binomial.m_per_party = 0;
  plan.binomial.honest_count = n_parties;
  return plan;
}

void RunConfig::validate() const {
  if (n_teachers < 2) {
    throw InvalidArgumentError("need at least 2 teachers");
  }
  if (threshold < 2 || threshold > n_teachers) {
    throw InvalidArgumentError("threshold must satisfy 2 <= t <= N");
  }
  if (class_count < 2) {
    throw InvalidArgumentError("need at least 2 classes");
  }
  check_party_set(dropouts, n_teachers, "dropout");
  check_party_set(compromised, n_teachers, "compromised");
  if (static_cast<int>(compromised.size()) > n_teachers / 3) {
    throw InvalidArgumentError(
        "at most floor(N/3) teachers may be compromised");
  }
}

std::size_t TranscriptStats::bytes_for(int party) const {
  std::size_t total = 0;
  for (const auto& msg : messages) {
    if (msg.kind == MessageKind::kCompromisedNoiseReveal) continue;
    if (msg.sender == party || msg.receiver == party) total += msg.bytes;
  }
  return total;
}

std::size_t TranscriptStats::total_bytes() const {
  std::size_t total = 0;
  for (const auto& msg : messages) {
    if (msg.kind == MessageKind::kCompromisedNoiseReveal) continue;
    total += msg.bytes;
  }
  return total;
}

std::size_t TranscriptStats::message_count() const { return messages.size(); }

Bigint encode_signed(long long value, const Bigint& n) {
  long v = static_cast<long>(value);
  Bigint magnitude = v >= 0 ? v : -v;
  if (2 * magnitude >= n) {
    throw EncodingOverflowError("plaintext outside the safe signed range");
  }
  if (v >= 0) return Bigint(v);
  return n + v;
}

long long decode_signed(const Bigint& raw, const Bigint& n) {
  if (raw < 0 || raw >= n) {
    throw InvalidArgumentError("raw plaintext out of range [0, n)");
  }
  Bigint centered = raw;
  if (2 * raw > n) centered = raw - n;
  if (!centered.fits_slong_p()) {
    throw EncodingOverflowError("decoded value exceeds 64-bit range");
  }
  return centered.get_si();
}

std::vector<long long> draw_noise(const NoisePlan& plan, int class_count,
                                  Rng& rng) {
  if (class_count < 1) {
    throw InvalidArgumentError("class count must be positive");
  }
  std::vector<long long> noise(static_cast<std::size_t>(class_count));
  if (plan.mechanism == Mechanism::kBinomial) {
    for (auto& z : noise) {
      z = sample_binomial_share(plan.binomial.m_per_party, rng);
    }
  } else {
    DiscreteGaussianSampler sampler(plan.gaussian.sigma_per_party);
    for (auto& z : noise) {
      z = sampler(rng);
    }
  }
  return noise;
}

NoisyVote encode_noisy_vote(const VoteVector& vote, const NoisePlan& plan,
                            const PublicKey& pk, Rng& rng,
                            int teacher_index) {
  check_vote(vote, static_cast<int>(vote.size()));
  NoisyVote out;
  out.noise = draw_noise(plan, static_cast<int>(vote.size()), rng);
  out.encrypted.teacher_index = teacher_index;
  out.plain_values.resize(vote.size());
  out.encrypted.per_class.reserve(vote.size());
  for (std::size_t j = 0; j < vote.size(); ++j) {
    out.plain_values[j] = vote[j] + out.noise[j];
    Bigint m = encode_signed(out.plain_values[j], pk.n);
    out.encrypted.per_class.push_back(encrypt(pk, m, rng));
  }
  return out;
}

std::vector<Ciphertext> aggregate_votes(
    const PublicKey& pk, const std::vector<EncryptedVote>& votes) {
  if (votes.empty()) {
    throw InvalidArgumentError("nothing to aggregate");
  }
  std::size_t c = votes.front().per_class.size();
  for (const auto& v : votes) {
    if (v.per_class.size() != c) {
      throw InvalidArgumentError("encrypted votes have mismatched widths");
    }
  }
  std::vector<Ciphertext> agg = votes.front().per_class;
  for (std::size_t i = 1; i < votes.size(); ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      agg[j] = add(pk, agg[j], votes[i].per_class[j]);
    }
  }
  return agg;
}

NoisyHistogram finalize(const PublicKey& pk, const ThresholdConfig& tc,
                        const NoisePlan& plan, int participants,
                        const std::vector<std::vector<PartialDecryption>>&
                            partials_per_class) {
  NoisyHistogram hist;
  hist.participants = participants;
  hist.raw_counts.reserve(partials_per_class.size());
  for (const auto& partials : partials_per_class) {
    Bigint raw = combine(pk, tc, partials);
    hist.raw_counts.push_back(decode_signed(raw, pk.n));
  }
  if (plan.mechanism == Mechanism::kBinomial) {
    // m is even, so the per-participant centering offset m/2 is integral.
    hist.offset = static_cast<long long>(participants) *
                  (plan.binomial.m_per_party / 2);
  } else {
    hist.offset = 0;
  }
  return hist;
}

int predict(const NoisyHistogram& hist) {
  if (hist.raw_counts.empty()) {
    throw InvalidArgumentError("empty histogram");
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < hist.raw_counts.size(); ++j) {
    if (hist.raw_counts[j] > hist.raw_counts[best]) best = j;
  }
  return static_cast<int>(best);
}

ProtocolResult run_protocol(const RunConfig& config,
                            const std::vector<VoteVector>& votes,
                            const NoisePlan& plan, const KeyMaterial& keys) {
  config.validate();
  if (static_cast<int>(votes.size()) != config.n_teachers) {
    throw InvalidArgumentError("need one vote per teacher");
  }
  for (const auto& vote : votes) {
    check_vote(vote, config.class_count);
  }
  if (keys.config.n_parties != config.n_teachers ||
      keys.config.threshold != config.threshold ||
      keys.shares.size() != static_cast<std::size_t>(config.n_teachers)) {
    throw InvalidArgumentError("key material does not match (N, t)");
  }
  for (int i = 0; i < config.n_teachers; ++i) {
    if (keys.shares[static_cast<std::size_t>(i)].index != i + 1) {
      throw InvalidArgumentError("key shares must be ordered by index");
    }
  }

  if (static_cast<int>(config.dropouts.size()) >=
      config.n_teachers - config.threshold) {
    throw AbortInsufficientPartiesError(
        "aborted: " + std::to_string(config.dropouts.size()) +
        " dropouts with N=" + std::to_string(config.n_teachers) +
        " t=" + std::to_string(config.threshold));
  }

  const PublicKey& pk = keys.public_key;
  const std::set<int> dropped(config.dropouts.begin(), config.dropouts.end());
  const std::set<int> compromised(config.compromised.begin(),
                                  config.compromised.end());
  std::size_t slot_bytes = ciphertext_byte_width(pk);
  std::size_t payload = slot_bytes * static_cast<std::size_t>(
                                         config.class_count);

  ProtocolResult result;

  // Step 1: surviving teachers upload encrypted noisy votes. A dropped
  // teacher's upload never arrives, so neither its vote nor its noise
  // enters the aggregate.
  std::vector<EncryptedVote> arrived;
  for (int i = 0; i < config.n_teachers; ++i) {
    if (dropped.count(i)) continue;
    result.participants.push_back(i);
    Rng teacher_rng = derive_rng(config.seed, kTeacherStream,
                                 static_cast<std::uint64_t>(i));
    NoisyVote nv = encode_noisy_vote(votes[static_cast<std::size_t>(i)], plan,
                                     pk, teacher_rng, i);
    arrived.push_back(std::move(nv.encrypted));
    result.transcript.messages.push_back(
        {1, MessageKind::kEncryptedVote, i, kAggregatorId, payload});
    if (compromised.count(i)) {
      // Side channel: the adversary learns this teacher's noise shares.
      result.transcript.messages.push_back(
          {0, MessageKind::kCompromisedNoiseReveal, i, kAdversaryId,
           static_cast<std::size_t>(config.class_count) * 8});
    }
  }

  // Step 2: homomorphic aggregation; the aggregator never decrypts here.
  std::vector<Ciphertext> aggregate = aggregate_votes(pk, arrived);

  // Step 3: send the aggregate to t randomly selected survivors.
  Rng select_rng = derive_rng(config.seed, kSelectStream);
  std::vector<std::size_t> order(result.participants.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_indices(order, select_rng);
  for (std::size_t i = 0; i < static_cast<std::size_t>(config.threshold);
       ++i) {
    result.decryptors.push_back(result.participants[order[i]]);
  }
  std::sort(result.decryptors.begin(), result.decryptors.end());
  for (int d : result.decryptors) {
    result.transcript.messages.push_back(
        {2, MessageKind::kAggregateBroadcast, kAggregatorId, d, payload});
  }

  // Step 4: selected teachers return partial decryptions per class.
  std::vector<std::vector<PartialDecryption>> partials_per_class(
      static_cast<std::size_t>(config.class_count));
  for (int d : result.decryptors) {
    const SecretKeyShare& share =
        keys.shares[static_cast<std::size_t>(d)];  // share index d+1
    for (int j = 0; j < config.class_count; ++j) {
      partials_per_class[static_cast<std::size_t>(j)].push_back(
          partial_decrypt(pk, keys.config, share,
                          aggregate[static_cast<std::size_t>(j)]));
    }
    result.transcript.messages.push_back(
        {3, MessageKind::kPartialDecryption, d, kAggregatorId, payload});
  }

  // Step 5: combine, decode, remove the deterministic offset.
  result.histogram =
      finalize(pk, keys.config, plan,
               static_cast<int>(result.participants.size()),
               partials_per_class);
  result.predicted = predict(result.histogram);
  return result;
}

NoisyHistogram shadow_histogram(const RunConfig& config,
                                const std::vector<VoteVector>& votes,
                                const NoisePlan& plan) {
  config.validate();
  if (static_cast<int>(votes.size()) != config.n_teachers) {
    throw InvalidArgumentError("need one vote per teacher");
  }
  for (const auto& vote : votes) {
    check_vote(vote, config.class_count);
  }
  if (static_cast<int>(config.dropouts.size()) >=
      config.n_teachers - config.threshold) {
    throw AbortInsufficientPartiesError("aborted: too many dropouts");
  }

  const std::set<int> dropped(config.dropouts.begin(), config.dropouts.end());
  NoisyHistogram hist;
  hist.raw_counts.assign(static_cast<std::size_t>(config.class_count), 0);
  for (int i = 0; i < config.n_teachers; ++i) {
    if (dropped.count(i)) continue;
    ++hist.participants;
    Rng teacher_rng = derive_rng(config.seed, kTeacherStream,
                                 static_cast<std::uint64_t>(i));
    std::vector<long long> noise =
        draw_noise(plan, config.class_count, teacher_rng);
    for (int j = 0; j < config.class_count; ++j) {
      hist.raw_counts[static_cast<std::size_t>(j)] +=
          votes[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
          noise[static_cast<std::size_t>(j)];
    }
  }
  if (plan.mechanism == Mechanism::kBinomial) {
    hist.offset = static_cast<long long>(hist.participants) *
                  (plan.binomial.m_per_party / 2);
  }
  return hist;
}

std::size_t estimate_traffic(int class_count, int key_bits) {
  if (class_count < 1) {
    throw InvalidArgumentError("class count must be positive");
  }
  if (key_bits != 512 && key_bits != 1024 && key_bits != 2048) {
    throw InvalidArgumentError("key_bits must be one of 512, 1024, 2048");
  }
  return static_cast<std::size_t>(2 * key_bits / 8) *
         static_cast<std::size_t>(class_count) * 3;
}

void write_transcript_jsonl(const TranscriptStats& transcript,
                            std::ostream& out) {
  for (const auto& msg : transcript.messages) {
    nlohmann::json line = {
        {"round", msg.round},   {"kind", kind_name(msg.kind)},
        {"sender", msg.sender}, {"receiver", msg.receiver},
        {"bytes", msg.bytes},
    };
    out << line.dump() << "\n";
  }
}

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  RunConfig config;
  try {
    config.n_teachers = doc.at("n_teachers").get<int>();
    config.threshold = doc.at("threshold").get<int>();
    config.class_count = doc.at("class_count").get<int>();
    config.mechanism =
        mechanism_from_name(doc.at("mechanism").get<std::string>());
    config.privacy.epsilon = doc.value("epsilon", 1.0);
    config.privacy.delta = doc.value("delta", 1e-3);
    config.privacy.gamma = doc.value("gamma", 1.0);
    config.dropouts = doc.value("dropouts", std::vector<int>{});
    config.compromised = doc.value("compromised", std::vector<int>{});
    config.seed = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  config.validate();
  return config;
}

}  // namespace dppp

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
// Secure aggregation of noisy one-hot votes.
//
// Each surviving teacher adds mechanism noise to its vote vector, encrypts
// every coordinate under the threshold Paillier public key and uploads the
// ciphertexts. The aggregator multiplies the ciphertexts coordinate-wise,
// sends the aggregate to t randomly selected surviving teachers, collects
// their partial decryptions and combines them. It learns only the noisy
// histogram and the argmax; no individual vote or noise share is visible
// unless a teacher is marked compromised.
//
// The simulation is a deterministic single-threaded event loop. Teacher i
// draws from its own derived random stream, and all noise draws happen
// before any encryption randomness on that stream: a plaintext shadow that
// replays just the noise draws reproduces the decrypted histogram exactly.

#ifndef DPPP_PROTOCOL_HPP_
#define DPPP_PROTOCOL_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dppp/mechanisms.hpp"
#include "dppp/rng.hpp"
#include "dppp/threshold_paillier.hpp"

namespace dppp {

enum class Mechanism { kBinomial, kDiscreteGaussian };

// CLI spellings: "bm" and "dgm".
std::string mechanism_name(Mechanism mechanism);
Mechanism mechanism_from_name(const std::string& name);

// One-hot class vote: exactly one entry is 1, the rest 0.
using VoteVector = std::vector<long long>;

// Tagged union of the two per-party noise plans.
struct NoisePlan {
  Mechanism mechanism = Mechanism::kBinomial;
  BinomialPlan binomial;
  GaussianPlan gaussian;
};

NoisePlan make_noise_plan(Mechanism mechanism, const PrivacyParams& params,
                          int n_parties, double sensitivity = 1.0);

// Degenerate plan with no noise at all (the epsilon -> infinity limit);
// useful for clean-path tests and controls.
NoisePlan zero_noise_plan(int n_parties);

struct EncryptedVote {
  int teacher_index = 0;
  std::vector<Ciphertext> per_class;
};

// A teacher's step-1 output: the noise it drew, the plaintext slot values
// (vote + noise, signed) and their encryptions.
struct NoisyVote {
  std::vector<long long> noise;
  std::vector<long long> plain_values;
  EncryptedVote encrypted;
};

struct NoisyHistogram {
  // Decrypted per-class sums after signed decoding. For the Binomial
  // mechanism these still include each participant's raw toss count.
  std::vector<long long> raw_counts;
  // participants * m/2 for Binomial (integer since m is even), 0 for the
  // discrete Gaussian. Centered count = raw_counts[j] - offset.
  long long offset = 0;
  int participants = 0;
};

struct RunConfig {
  int n_teachers = 0;
  int threshold = 0;
  int class_count = 0;
  Mechanism mechanism = Mechanism::kBinomial;
  PrivacyParams privacy;
  std::vector<int> dropouts;     // fail after step 1; upload never arrives
  std::vector<int> compromised;  // noise revealed to the aggregator
  std::uint64_t seed = 0;

  // Range/distinctness checks; |compromised| <= floor(N/3).
  void validate() const;
};

enum class MessageKind {
  kEncryptedVote,
  kAggregateBroadcast,
  kPartialDecryption,
  kCompromisedNoiseReveal,  // side channel, not a protocol message
};

struct TranscriptMessage {
  int round = 0;  // 1 = upload, 2 = aggregate, 3 = partials; 0 = side channel
  MessageKind kind = MessageKind::kEncryptedVote;
  int sender = 0;
  int receiver = 0;
  std::size_t bytes = 0;
};

inline constexpr int kAggregatorId = -1;
inline constexpr int kAdversaryId = -2;

struct TranscriptStats {
  std::vector<TranscriptMessage> messages;

  // Protocol bytes sent or received by the given party id. Byte counts
  // cover the cryptographic payload (ciphertext-width values); the
  // compromised-noise side channel is excluded.
  std::size_t bytes_for(int party) const;
  std::size_t total_bytes() const;
  std::size_t message_count() const;
};

struct ProtocolResult {
  NoisyHistogram histogram;
  int predicted = -1;
  TranscriptStats transcript;
  std::vector<int> decryptors;    // the t teachers selected for step 3/4
  std::vector<int> participants;  // surviving teachers, ascending
};

// Centered modular encoding of signed plaintexts: v >= 0 stays v, v < 0
// becomes n + v. Throws EncodingOverflowError when 2|v| >= n.
Bigint encode_signed(long long value, const Bigint& n);
long long decode_signed(const Bigint& raw, const Bigint& n);

// Draws per-class noise for one teacher. Binomial: raw head counts in
// [0, m]. Discrete Gaussian: signed integers in [-B, B].
std::vector<long long> draw_noise(const NoisePlan& plan, int class_count,
                                  Rng& rng);

// Step 1 for one teacher: draw noise for every class, then encrypt each
// vote + noise slot. All noise is drawn before any encryption randomness.
NoisyVote encode_noisy_vote(const VoteVector& vote, const NoisePlan& plan,
                            const PublicKey& pk, Rng& rng,
                            int teacher_index = 0);

// Step 2: coordinate-wise homomorphic sum of the received votes.
std::vector<Ciphertext> aggregate_votes(const PublicKey& pk,
                                        const std::vector<EncryptedVote>& votes);

// Step 5: per-class threshold combination, signed decode, offset.
NoisyHistogram finalize(const PublicKey& pk, const ThresholdConfig& tc,
                        const NoisePlan& plan, int participants,
                        const std::vector<std::vector<PartialDecryption>>&
                            partials_per_class);

// Argmax over raw counts; ties go to the lowest class index.
int predict(const NoisyHistogram& hist);

// Runs steps 1-5 with dropout and compromise injection. Throws
// AbortInsufficientPartiesError when |dropouts| >= N - t.
ProtocolResult run_protocol(const RunConfig& config,
                            const std::vector<VoteVector>& votes,
                            const NoisePlan& plan, const KeyMaterial& keys);

// Plaintext shadow of run_protocol: replays the same per-teacher noise
// streams without any cryptography and returns the histogram the encrypted
// pipeline would decrypt. Used by equivalence tests and fast sweeps.
NoisyHistogram shadow_histogram(const RunConfig& config,
                                const std::vector<VoteVector>& votes,
                                const NoisePlan& plan);

// Bytes a teacher on the full three-message path exchanges per query:
// (2 * key_bits / 8) * class_count * 3.
std::size_t estimate_traffic(int class_count, int key_bits);

// One JSON object per protocol message: round, kind, sender, receiver,
// bytes.
void write_transcript_jsonl(const TranscriptStats& transcript,
                            std::ostream& out);

// Reads {"n_teachers", "threshold", "class_count", "mechanism", "epsilon",
// "delta", "gamma", "dropouts", "compromised", "seed"}; the last four are
// optional.
RunConfig run_config_from_json(const std::string& text);

}  // namespace dppp

#endif  // DPPP_PROTOCOL_HPP_

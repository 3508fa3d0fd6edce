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
// Threshold variant of the Paillier cryptosystem.
//
// A trusted dealer generates an RSA modulus n = pq from safe primes and
// splits the decryption exponent into N Shamir shares so that any t of the
// parties can jointly decrypt while t-1 learn nothing. Ciphertexts are
// additively homomorphic: the product of two ciphertexts decrypts to the
// sum of the plaintexts mod n.

#ifndef DPPP_THRESHOLD_PAILLIER_HPP_
#define DPPP_THRESHOLD_PAILLIER_HPP_

#include <cstdint>
#include <vector>

#include "dppp/bigint.hpp"
#include "dppp/rng.hpp"

namespace dppp {

struct ThresholdConfig {
  int n_parties = 0;  // N, number of share holders
  int threshold = 0;  // t, shares needed to decrypt; 2 <= t <= N
};

struct PublicKey {
  Bigint n;
  Bigint n_squared;
  Bigint g;  // fixed to n + 1
  int bit_length = 0;

  // [u32 big-endian bit_length][n, zero-padded to bit_length/8 bytes]
  std::vector<std::uint8_t> to_bytes() const;
  static PublicKey from_bytes(const std::vector<std::uint8_t>& bytes);
};

struct SecretKeyShare {
  int index = 0;  // share evaluation point, in [1, N]
  Bigint value;
};

struct Ciphertext {
  Bigint value;  // element of Z*_{n^2}
};

struct PartialDecryption {
  int index = 0;
  Bigint value;
};

struct KeyMaterial {
  PublicKey public_key;
  ThresholdConfig config;
  std::vector<SecretKeyShare> shares;
};

// Generates an n of exactly `key_bits` bits from two safe primes and deals
// Shamir shares of the decryption exponent. key_bits must be >= 512 and a
// multiple of 8; config must satisfy 2 <= threshold <= n_parties.
KeyMaterial deal_keys(int key_bits, const ThresholdConfig& config, Rng& rng);

// E(m) = (1 + m*n) * r^n mod n^2 with fresh uniform r in Z*_n.
// Requires 0 <= m < n.
Ciphertext encrypt(const PublicKey& pk, const Bigint& m, Rng& rng);

// Homomorphic addition: decrypts to the sum of the two plaintexts mod n.
Ciphertext add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);

// Party i's decryption share c^(2 * Delta * s_i) mod n^2, Delta = N!.
PartialDecryption partial_decrypt(const PublicKey& pk,
                                  const ThresholdConfig& config,
                                  const SecretKeyShare& share,
                                  const Ciphertext& ct);

// Lagrange-combines any t of the partial decryptions (the first t supplied
// are used). Throws InsufficientSharesError given fewer than t and
// DuplicateShareError on repeated indices.
Bigint combine(const PublicKey& pk, const ThresholdConfig& config,
               const std::vector<PartialDecryption>& partials);

// Wire width of one ciphertext: always 2 * key_bits / 8 bytes.
std::size_t ciphertext_byte_width(const PublicKey& pk);

std::vector<std::uint8_t> ciphertext_to_bytes(const PublicKey& pk,
                                              const Ciphertext& ct);
Ciphertext ciphertext_from_bytes(const PublicKey& pk,
                                 const std::vector<std::uint8_t>& bytes);

// [u32 big-endian index][value, zero-padded to the ciphertext width]
std::vector<std::uint8_t> partial_to_bytes(const PublicKey& pk,
                                           const PartialDecryption& pd);
PartialDecryption partial_from_bytes(const PublicKey& pk,
                                     const std::vector<std::uint8_t>& bytes);

}  // namespace dppp

#endif  // DPPP_THRESHOLD_PAILLIER_HPP_

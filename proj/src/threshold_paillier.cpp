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

#include "dppp/threshold_paillier.hpp"

#include <set>
#include <string>

#include "dppp/errors.hpp"

namespace dppp {
namespace {

// Small primes used to pre-screen safe-prime candidates before the
// expensive Miller-Rabin rounds.
const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    std::vector<bool> composite(20000, false);
    for (unsigned long i = 2; i < composite.size(); ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < composite.size(); j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

// Returns a safe prime p = 2p' + 1 of exactly `bits` bits with the top two
// bits set, along with p'.
void generate_safe_prime(Rng& rng, std::size_t bits, Bigint* p,
                         Bigint* p_prime) {
  for (;;) {
    Bigint candidate = random_bits(rng, bits - 1);
    // Top two bits set so the product of two such primes keeps full width;
    // low bit set so the candidate is odd.
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), bits - 3);
    mpz_setbit(candidate.get_mpz_t(), 0);

    Bigint safe = 2 * candidate + 1;
    bool sieved_out = false;
    for (unsigned long r : small_primes()) {
      if (mpz_fdiv_ui(candidate.get_mpz_t(), r) == 0 ||
          mpz_fdiv_ui(safe.get_mpz_t(), r) == 0) {
        if (candidate != r && safe != r) {
          sieved_out = true;
          break;
        }
      }
    }
    if (sieved_out) continue;
    if (!probably_prime(candidate)) continue;
    if (!probably_prime(safe)) continue;
    *p = safe;
    *p_prime = candidate;
    return;
  }
}

void check_config(const ThresholdConfig& config) {
  if (config.n_parties < 2) {
    throw InvalidArgumentError("threshold config: need at least 2 parties");
  }
  if (config.threshold < 2 || config.threshold > config.n_parties) {
    throw InvalidArgumentError(
        "threshold config: threshold must satisfy 2 <= t <= N, got t=" +
        std::to_string(config.threshold) +
        " N=" + std::to_string(config.n_parties));
  }
}

}  // namespace

std::vector<std::uint8_t> PublicKey::to_bytes() const {
  std::vector<std::uint8_t> out(4);
  std::uint32_t bits = static_cast<std::uint32_t>(bit_length);
  out[0] = static_cast<std::uint8_t>(bits >> 24);
  out[1] = static_cast<std::uint8_t>(bits >> 16);
  out[2] = static_cast<std::uint8_t>(bits >> 8);
  out[3] = static_cast<std::uint8_t>(bits);
  auto body = to_fixed_bytes(n, static_cast<std::size_t>(bit_length) / 8);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

PublicKey PublicKey::from_bytes(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) {
    throw ParseError("public key blob too short");
  }
  std::uint32_t bits = (static_cast<std::uint32_t>(bytes[0]) << 24) |
                       (static_cast<std::uint32_t>(bytes[1]) << 16) |
                       (static_cast<std::uint32_t>(bytes[2]) << 8) |
                       static_cast<std::uint32_t>(bytes[3]);
  if (bits == 0 || bits % 8 != 0 || bytes.size() != 4 + bits / 8) {
    throw ParseError("public key blob has inconsistent length");
  }
  PublicKey pk;
  pk.bit_length = static_cast<int>(bits);
  pk.n = dppp::from_bytes(bytes.data() + 4, bytes.size() - 4);
  pk.n_squared = pk.n * pk.n;
  pk.g = pk.n + 1;
  return pk;
}

KeyMaterial deal_keys(int key_bits, const ThresholdConfig& config, Rng& rng) {
  check_config(config);
  if (key_bits < 512 || key_bits % 8 != 0) {
    throw InvalidArgumentError(
        "key_bits must be a multiple of 8 and at least 512");
  }

  Bigint p, p_prime, q, q_prime;
  do {
    generate_safe_prime(rng, static_cast<std::size_t>(key_bits) / 2, &p,
                        &p_prime);
    generate_safe_prime(rng, static_cast<std::size_t>(key_bits) / 2, &q,
                        &q_prime);
  } while (p == q);

  KeyMaterial out;
  out.config = config;
  out.public_key.n = p * q;
  out.public_key.n_squared = out.public_key.n * out.public_key.n;
  out.public_key.g = out.public_key.n + 1;
  out.public_key.bit_length = key_bits;

  // Decryption exponent d with d = 1 (mod n) and d = 0 (mod p'q'), so that
  // c^d has the 1+mn form needed by the L function.
  Bigint m_prime = p_prime * q_prime;
  Bigint d = m_prime * invmod(m_prime, out.public_key.n);

  // Shamir polynomial of degree t-1 over Z_{n * p'q'} with constant term d.
  Bigint share_modulus = out.public_key.n * m_prime;
  std::vector<Bigint> coeffs(static_cast<std::size_t>(config.threshold));
  coeffs[0] = d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    coeffs[k] = random_below(rng, share_modulus);
  }

  out.shares.reserve(static_cast<std::size_t>(config.n_parties));
  for (int i = 1; i <= config.n_parties; ++i) {
    // Horner evaluation at x = i.
    Bigint acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc = (acc * i + coeffs[k]) % share_modulus;
    }
    out.shares.push_back(SecretKeyShare{i, acc});
  }
  return out;
}

Ciphertext encrypt(const PublicKey& pk, const Bigint& m, Rng& rng) {
  if (m < 0 || m >= pk.n) {
    throw InvalidArgumentError("plaintext out of range [0, n)");
  }
  Bigint r = random_coprime(rng, pk.n);
  // g = n+1, so g^m = 1 + m*n (mod n^2); no exponentiation needed there.
  Bigint gm = (1 + m * pk.n) % pk.n_squared;
  Bigint rn = powmod(r, pk.n, pk.n_squared);
  return Ciphertext{(gm * rn) % pk.n_squared};
}

Ciphertext add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{(a.value * b.value) % pk.n_squared};
}

PartialDecryption partial_decrypt(const PublicKey& pk,
                                  const ThresholdConfig& config,
                                  const SecretKeyShare& share,
                                  const Ciphertext& ct) {
  check_config(config);
  if (share.index < 1 || share.index > config.n_parties) {
    throw InvalidArgumentError("share index out of range");
  }
  Bigint delta = factorial(static_cast<unsigned long>(config.n_parties));
  Bigint exponent = 2 * delta * share.value;
  return PartialDecryption{share.index,
                           powmod(ct.value, exponent, pk.n_squared)};
}

Bigint combine(const PublicKey& pk, const ThresholdConfig& config,
               const std::vector<PartialDecryption>& partials) {
  check_config(config);
  std::size_t t = static_cast<std::size_t>(config.threshold);
  if (partials.size() < t) {
    throw InsufficientSharesError(
        "need " + std::to_string(t) + " partial decryptions, got " +
        std::to_string(partials.size()));
  }
  std::set<int> seen;
  for (const auto& pd : partials) {
    if (pd.index < 1 || pd.index > config.n_parties) {
      throw InvalidArgumentError("partial decryption index out of range");
    }
    if (!seen.insert(pd.index).second) {
      throw DuplicateShareError("duplicate partial decryption for index " +
                                std::to_string(pd.index));
    }
  }

  Bigint delta = factorial(static_cast<unsigned long>(config.n_parties));
  Bigint acc = 1;
  for (std::size_t i = 0; i < t; ++i) {
    // Integer Lagrange coefficient at 0, scaled by Delta so division is
    // exact: lambda_i = Delta * prod_{j != i} (-x_j) / (x_i - x_j).
    Bigint num = delta;
    Bigint den = 1;
    for (std::size_t j = 0; j < t; ++j) {
      if (j == i) continue;
      num *= -partials[j].index;
      den *= partials[i].index - partials[j].index;
    }
    Bigint lambda, rem;
    mpz_tdiv_qr(lambda.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                den.get_mpz_t());
    if (rem != 0) {
      throw InvalidArgumentError("non-integral Lagrange coefficient");
    }
    // lambda may be negative; powmod then inverts the base, which requires
    // it to be a unit mod n^2.
    Bigint g;
    mpz_gcd(g.get_mpz_t(), partials[i].value.get_mpz_t(),
            pk.n_squared.get_mpz_t());
    if (g != 1) {
      throw InvalidArgumentError("partial decryption is not a unit");
    }
    acc = (acc * powmod(partials[i].value, 2 * lambda, pk.n_squared)) %
          pk.n_squared;
  }

  // acc = c^(4 Delta^2 d) = (1 + n)^(4 Delta^2 m) = 1 + 4 Delta^2 m n.
  Bigint l = (acc - 1) / pk.n;
  Bigint unscale = invmod((4 * delta * delta) % pk.n, pk.n);
  return (l * unscale) % pk.n;
}

std::size_t ciphertext_byte_width(const PublicKey& pk) {
  return static_cast<std::size_t>(pk.bit_length) / 4;
}

std::vector<std::uint8_t> ciphertext_to_bytes(const PublicKey& pk,
                                              const Ciphertext& ct) {
  return to_fixed_bytes(ct.value, ciphertext_byte_width(pk));
}

Ciphertext ciphertext_from_bytes(const PublicKey& pk,
                                 const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() != ciphertext_byte_width(pk)) {
    throw ParseError("ciphertext blob has wrong width");
  }
  return Ciphertext{from_bytes(bytes.data(), bytes.size())};
}

std::vector<std::uint8_t> partial_to_bytes(const PublicKey& pk,
                                           const PartialDecryption& pd) {
  std::vector<std::uint8_t> out(4);
  std::uint32_t idx = static_cast<std::uint32_t>(pd.index);
  out[0] = static_cast<std::uint8_t>(idx >> 24);
  out[1] = static_cast<std::uint8_t>(idx >> 16);
  out[2] = static_cast<std::uint8_t>(idx >> 8);
  out[3] = static_cast<std::uint8_t>(idx);
  auto body = to_fixed_bytes(pd.value, ciphertext_byte_width(pk));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

PartialDecryption partial_from_bytes(const PublicKey& pk,
                                     const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() != 4 + ciphertext_byte_width(pk)) {
    throw ParseError("partial decryption blob has wrong width");
  }
  std::uint32_t idx = (static_cast<std::uint32_t>(bytes[0]) << 24) |
                      (static_cast<std::uint32_t>(bytes[1]) << 16) |
                      (static_cast<std::uint32_t>(bytes[2]) << 8) |
                      static_cast<std::uint32_t>(bytes[3]);
  return PartialDecryption{static_cast<int>(idx),
                           from_bytes(bytes.data() + 4, bytes.size() - 4)};
}

}  // namespace dppp

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

#include "dppp/rng.hpp"

#include <cmath>
#include <utility>

#include "dppp/errors.hpp"

namespace dppp {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

Rng derive_rng(std::uint64_t seed, std::uint64_t stream,
               std::uint64_t substream) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ stream);
  s = mix64(s ^ substream);
  return Rng(s);
}

double canonical(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw InvalidArgumentError("uniform_index: n must be positive");
  // Reject the tail of the 64-bit range that does not divide evenly.
  std::uint64_t bound = n;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t w = rng();
    if (w < limit) return static_cast<std::size_t>(w % bound);
  }
}

void shuffle_indices(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

double standard_normal(Rng& rng) {
  // Box-Muller on two explicit uniforms; consumes exactly two words.
  // u1 lies in (0, 1] so the log is finite.
  double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  double u2 = canonical(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

double laplace(Rng& rng, double scale) {
  double u = canonical(rng);
  while (u == 0.0 || u == 0.5) u = canonical(rng);
  double centered = u - 0.5;
  double sign = centered < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::fabs(centered));
}

Bigint random_bits(Rng& rng, std::size_t bits) {
  if (bits == 0) return 0;
  std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = rng();
  Bigint out;
  mpz_import(out.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0,
             buf.data());
  out >>= (words * 64 - bits);
  return out;
}

Bigint random_below(Rng& rng, const Bigint& bound) {
  if (bound <= 0) {
    throw InvalidArgumentError("random_below: bound must be positive");
  }
  std::size_t bits = bit_length(bound);
  for (;;) {
    Bigint candidate = random_bits(rng, bits);
    if (candidate < bound) return candidate;
  }
}

Bigint random_coprime(Rng& rng, const Bigint& modulus) {
  if (modulus <= 1) {
    throw InvalidArgumentError("random_coprime: modulus must exceed 1");
  }
  Bigint g;
  for (;;) {
    Bigint candidate = random_below(rng, modulus);
    if (candidate == 0) continue;
    mpz_gcd(g.get_mpz_t(), candidate.get_mpz_t(), modulus.get_mpz_t());
    if (g == 1) return candidate;
  }
}

}  // namespace dppp

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

#ifndef DPPP_RNG_HPP_
#define DPPP_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "dppp/bigint.hpp"

namespace dppp {

// All randomness in the library flows through mt19937_64 instances created
// here. Sampling routines below avoid std::*_distribution on purpose: their
// algorithms are implementation-defined, and simulation outputs must be
// reproducible bit-for-bit from a seed.
using Rng = std::mt19937_64;

// splitmix64 finalizer, used to decorrelate derived stream seeds.
std::uint64_t mix64(std::uint64_t x);

Rng make_rng(std::uint64_t seed);

// Independent stream keyed by (seed, stream, substream). Streams derived
// from the same seed with different tags never share state.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream,
               std::uint64_t substream = 0);

// Uniform double in [0, 1) with 53 random bits.
double canonical(Rng& rng);

// Uniform index in [0, n), by rejection. n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Fisher-Yates; deterministic for a given rng state.
void shuffle_indices(std::vector<std::size_t>& v, Rng& rng);

// Standard normal via Box-Muller; consumes exactly two words per call.
double standard_normal(Rng& rng);

// Laplace(0, scale) by inverse CDF.
double laplace(Rng& rng, double scale);

// Uniform integer with exactly `bits` random bits (top bits zeroed).
Bigint random_bits(Rng& rng, std::size_t bits);

// Uniform in [0, bound), by rejection. bound must be positive.
Bigint random_below(Rng& rng, const Bigint& bound);

// Uniform over the units of Z_modulus, i.e. gcd(r, modulus) = 1.
Bigint random_coprime(Rng& rng, const Bigint& modulus);

}  // namespace dppp

#endif  // DPPP_RNG_HPP_

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

#ifndef DPPP_BIGINT_HPP_
#define DPPP_BIGINT_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dppp {

using Bigint = mpz_class;

// base^exp mod modulus. Negative exponents are allowed when base is
// invertible mod modulus (GMP handles the inversion internally).
Bigint powmod(const Bigint& base, const Bigint& exp, const Bigint& modulus);

// Multiplicative inverse; throws InvalidArgumentError if none exists.
Bigint invmod(const Bigint& value, const Bigint& modulus);

Bigint factorial(unsigned long n);

// Miller-Rabin with 25 rounds.
bool probably_prime(const Bigint& v);

std::size_t bit_length(const Bigint& v);

// Big-endian, zero-padded to exactly n_bytes. Throws if v is negative or
// does not fit.
std::vector<std::uint8_t> to_fixed_bytes(const Bigint& v, std::size_t n_bytes);

Bigint from_bytes(const std::uint8_t* data, std::size_t size);

std::string to_hex(const Bigint& v);
Bigint from_hex(const std::string& s);

}  // namespace dppp

#endif  // DPPP_BIGINT_HPP_

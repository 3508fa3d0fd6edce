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

#include "dppp/bigint.hpp"

#include <algorithm>

#include "dppp/errors.hpp"

namespace dppp {

Bigint powmod(const Bigint& base, const Bigint& exp, const Bigint& modulus) {
  Bigint out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

Bigint invmod(const Bigint& value, const Bigint& modulus) {
  Bigint out;
  if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t()) ==
      0) {
    throw InvalidArgumentError("value is not invertible modulo modulus");
  }
  return out;
}

Bigint factorial(unsigned long n) {
  Bigint out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

bool probably_prime(const Bigint& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), 25) != 0;
}

std::size_t bit_length(const Bigint& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::vector<std::uint8_t> to_fixed_bytes(const Bigint& v,
                                         std::size_t n_bytes) {
  if (v < 0) {
    throw InvalidArgumentError("cannot serialize negative value");
  }
  std::size_t needed = (bit_length(v) + 7) / 8;
  if (needed > n_bytes) {
    throw EncodingOverflowError("value needs " + std::to_string(needed) +
                                " bytes, field is " + std::to_string(n_bytes));
  }
  std::vector<std::uint8_t> out(n_bytes, 0);
  if (v != 0) {
    std::size_t written = 0;
    mpz_export(out.data() + (n_bytes - needed), &written, 1, 1, 1, 0,
               v.get_mpz_t());
  }
  return out;
}

Bigint from_bytes(const std::uint8_t* data, std::size_t size) {
  Bigint out;
  if (size > 0) {
    mpz_import(out.get_mpz_t(), size, 1, 1, 1, 0, data);
  }
  return out;
}

std::string to_hex(const Bigint& v) { return v.get_str(16); }

Bigint from_hex(const std::string& s) {
  Bigint out;
  if (out.set_str(s, 16) != 0) {
    throw ParseError("invalid hex string: " + s);
  }
  return out;
}

}  // namespace dppp

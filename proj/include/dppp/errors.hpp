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

#ifndef DPPP_ERRORS_HPP_
#define DPPP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dppp {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

// Fewer than t partial decryptions were supplied to combine().
class InsufficientSharesError : public Error {
 public:
  explicit InsufficientSharesError(const std::string& what) : Error(what) {}
};

// Two partial decryptions carry the same share index.
class DuplicateShareError : public Error {
 public:
  explicit DuplicateShareError(const std::string& what) : Error(what) {}
};

// A vote/noise value does not fit the plaintext encoding.
class EncodingOverflowError : public Error {
 public:
  explicit EncodingOverflowError(const std::string& what) : Error(what) {}
};

// Protocol abort: fewer surviving teachers than the decryption threshold.
class AbortInsufficientPartiesError : public Error {
 public:
  explicit AbortInsufficientPartiesError(const std::string& what)
      : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace dppp

#endif  // DPPP_ERRORS_HPP_

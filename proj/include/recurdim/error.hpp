// Copyright 2026 The recurdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RECURDIM_ERROR_HPP_
#define RECURDIM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace recurdim {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed system / potential descriptor or option value.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed its configured enumeration budget. Raised
// before any work is done; results are never silently truncated.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed. Always a bug, never a data condition.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Bisection bracket could not be established.
class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace recurdim

#endif  // RECURDIM_ERROR_HPP_

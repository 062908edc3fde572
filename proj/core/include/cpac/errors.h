// Copyright 2026 The cpac Authors
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

#ifndef CPAC_ERRORS_H_
#define CPAC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cpac {

// Root of every error the library throws. The CLI maps the concrete
// subclasses onto exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatches, out-of-range indices or
// parameters outside their documented domain.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed data that violates a domain invariant (distribution does not
// sum to one, duplicate hypotheses, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An exact routine was asked to do more work than its configured cap allows.
// Results are never silently approximated; callers get this instead.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A search ran out of candidates without finding a feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside a solver (cycling guard exhausted, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpac

#endif  // CPAC_ERRORS_H_

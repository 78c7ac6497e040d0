// Copyright 2026 The eqkit Authors.
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

#ifndef EQKIT_ERRORS_H_
#define EQKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace eqkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A profile or distribution lies outside its space.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The utility oracle produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Invalid construction parameters (games, configs, options).
class ParameterError : public Error {
 public:
  using Error::Error;
};

}  // namespace eqkit

#endif  // EQKIT_ERRORS_H_

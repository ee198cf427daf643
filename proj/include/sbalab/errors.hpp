// Copyright 2026 The sbalab Authors.
//
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

#ifndef SBALAB_ERRORS_HPP_
#define SBALAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sbalab {

// Money is plain double; every comparison between money amounts goes
// through kMoneyTol.
using Money = double;
inline constexpr double kMoneyTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation (item index >= m,
// negative harmonic argument, nonpositive anchor, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of the operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The instance exceeds the exhaustive-enumeration cap of the operation.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Rejected hypergraph input.
class ValidationError : public Error {
 public:
  enum class Kind { kNegativeWeight, kDuplicateEdge, kEmptyEdge, kItemOutOfRange };
  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Rejected generator parameters; the message lists the violated constraint.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Experiment-config schema violation; `path` is the JSON path of the field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbalab

#endif  // SBALAB_ERRORS_HPP_

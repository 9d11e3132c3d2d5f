// Copyright 2026 The qnft Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qnft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register or chain exceeds the supported size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Qubit/vertex index out of range or duplicated.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Numeric argument outside its admissible domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Phase budget (sum of block phases < pi) violated.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class CodecError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public CodecError {
 public:
  using CodecError::CodecError;
};

/// Block appended out of sequence.
class OrderingError : public Error {
 public:
  using Error::Error;
};

class ConsensusError : public Error {
 public:
  using Error::Error;
};

class PolicyError : public ConsensusError {
 public:
  using ConsensusError::ConsensusError;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class TomographyError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public TomographyError {
 public:
  using TomographyError::TomographyError;
};

/// Invalid configuration document. `path()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qnft

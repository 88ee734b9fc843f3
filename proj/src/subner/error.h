// Copyright (c) 2026 The subner Authors
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

#ifndef SUBNER_ERROR_H_
#define SUBNER_ERROR_H_

#include <stdexcept>
#include <string>

namespace subner {

// Error categories. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Invalid argument or configuration value.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kUsage, what) {}
};

// Malformed input data, missing files, bad lexica or corpora.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCode::kData, what) {}
};

// Non-finite values during training or optimization.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

// Model container failures; each kind is reported separately.
class ModelFormatError : public DataError {
 public:
  enum class Kind { kTruncated, kUnknownVersion, kShapeMismatch, kMalformed };

  ModelFormatError(Kind kind, const std::string& what)
      : DataError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace subner

#endif  // SUBNER_ERROR_H_

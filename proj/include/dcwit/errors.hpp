// Copyright 2026 The dcwit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception hierarchy used by every dcwit module. Each error remembers the
 * module and operation that raised it so that the command-line surface and
 * the C API can report where a failure originated.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace dcwit {

enum class ErrorCode {
    Normalization = 1,
    Range,
    Shape,
    Index,
    InvalidInput,
    CapExceeded,
    EmptySetting,
    Parse,
    Validation,
    UnknownKey,
    Io,
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string module, std::string operation,
          const std::string &cause)
        : std::runtime_error(cause), code_(code), module_(std::move(module)),
          operation_(std::move(operation)) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string &module() const noexcept { return module_; }
    [[nodiscard]] const std::string &operation() const noexcept {
        return operation_;
    }

  private:
    ErrorCode code_;
    std::string module_;
    std::string operation_;
};

template <ErrorCode Code> class TypedError : public Error {
  public:
    TypedError(std::string module, std::string operation,
               const std::string &cause)
        : Error(Code, std::move(module), std::move(operation), cause) {}
};

using NormalizationError = TypedError<ErrorCode::Normalization>;
using RangeError = TypedError<ErrorCode::Range>;
using ShapeError = TypedError<ErrorCode::Shape>;
using IndexError = TypedError<ErrorCode::Index>;
using InvalidInput = TypedError<ErrorCode::InvalidInput>;
using CapExceeded = TypedError<ErrorCode::CapExceeded>;
using EmptySetting = TypedError<ErrorCode::EmptySetting>;
using ParseError = TypedError<ErrorCode::Parse>;
using ValidationError = TypedError<ErrorCode::Validation>;
using UnknownKey = TypedError<ErrorCode::UnknownKey>;
using IoError = TypedError<ErrorCode::Io>;

} // namespace dcwit

// Copyright 2026 The ProspectNet Authors
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

#ifndef PROSPECTNET__ERRORS_HPP_
#define PROSPECTNET__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace prospectnet
{

/// Error categories. Mirrored one-to-one by the pn_status codes of the C API.
enum class ErrorCode {
  kIo = 1,
  kParse = 2,
  kValidation = 3,
  kConfig = 4,
  kDimension = 5,
  kContract = 6,
  kNotFound = 7,
  kInternal = 8,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

struct IoError : Error
{
  explicit IoError(const std::string & what) : Error(ErrorCode::kIo, what) {}
};

struct ParseError : Error
{
  explicit ParseError(const std::string & what) : Error(ErrorCode::kParse, what) {}
};

struct ValidationError : Error
{
  explicit ValidationError(const std::string & what) : Error(ErrorCode::kValidation, what) {}
};

struct ConfigError : Error
{
  explicit ConfigError(const std::string & what) : Error(ErrorCode::kConfig, what) {}
};

/// Shape or size mismatch between numeric operands.
struct DimensionError : Error
{
  explicit DimensionError(const std::string & what) : Error(ErrorCode::kDimension, what) {}
};

/// A caller broke an API precondition (non-scalar loss, K larger than the pool, ...).
struct ContractError : Error
{
  explicit ContractError(const std::string & what) : Error(ErrorCode::kContract, what) {}
};

struct NotFoundError : Error
{
  explicit NotFoundError(const std::string & what) : Error(ErrorCode::kNotFound, what) {}
};

}  // namespace prospectnet

#endif  // PROSPECTNET__ERRORS_HPP_

// Copyright 2026 The Composer Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace composer {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
  virtual const char *kind() const noexcept { return "Error"; }
};

#define COMPOSER_ERROR(Name)                                        \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string &msg) : Error(msg) {}           \
    const char *kind() const noexcept override { return #Name; }    \
  };

COMPOSER_ERROR(ValidationError)
COMPOSER_ERROR(NotPSDError)
COMPOSER_ERROR(NormalizationError)
COMPOSER_ERROR(ShapeError)
COMPOSER_ERROR(CapacityError)
COMPOSER_ERROR(MaskError)
COMPOSER_ERROR(DegenerateGapError)
COMPOSER_ERROR(SpectralBoundError)
COMPOSER_ERROR(BindError)
COMPOSER_ERROR(SectorError)
COMPOSER_ERROR(DegenerateBasisError)
COMPOSER_ERROR(RankError)
COMPOSER_ERROR(ZeroTensorError)
COMPOSER_ERROR(TopologyError)

#undef COMPOSER_ERROR

/** FCIDUMP / JSON syntax problems. Carries the 1-based line when known. */
class ParseError : public Error {
 public:
  ParseError(const std::string &msg, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  explicit ParseError(const std::string &msg) : ParseError(msg, 0) {}
  int line() const noexcept { return line_; }
  const char *kind() const noexcept override { return "ParseError"; }

 private:
  int line_;
};

}  // namespace composer

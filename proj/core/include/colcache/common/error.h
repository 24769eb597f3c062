// Copyright 2026 The colcache Authors.
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace colcache {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metadata section could not be decoded. offset() is the byte position
/// at which decoding failed (for truncation, the end of the input).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, uint64_t offset);
  uint64_t offset() const noexcept { return offset_; }

 private:
  uint64_t offset_;
};

class CorruptFileError : public Error {
 public:
  using Error::Error;
};

class DecompressError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain (index out of range, etc).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An object buffer failed header or bounds validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class OversizeError : public Error {
 public:
  using Error::Error;
};

/// Storage failure inside a cache backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class StaleDatasetError : public Error {
 public:
  using Error::Error;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace colcache

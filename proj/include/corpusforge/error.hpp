// Copyright 2026 The corpusforge Authors.
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

namespace corpusforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed XML in a dump. byte_offset is relative to the decompressed stream.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t byte_offset)
      : Error(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::uint64_t byte_offset() const { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

// The compressed stream ended before the XML document was complete.
class TruncatedStreamError : public Error {
 public:
  TruncatedStreamError(const std::string& what, std::uint64_t pages_emitted)
      : Error(what + " (" + std::to_string(pages_emitted) +
              " pages emitted before truncation)"),
        pages_emitted_(pages_emitted) {}
  std::uint64_t pages_emitted() const { return pages_emitted_; }

 private:
  std::uint64_t pages_emitted_;
};

// HTTP 404 for a dump: the project does not exist for that language.
class AbsentProjectError : public Error {
 public:
  using Error::Error;
};

class RetryableNetworkError : public Error {
 public:
  RetryableNetworkError(const std::string& what, int attempts)
      : Error(what + " after " + std::to_string(attempts) + " attempt(s)"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Cross-file inconsistency, e.g. a bucket member without a signature.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed; wraps the underlying message with the stage name.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace corpusforge

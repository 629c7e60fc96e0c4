/* Copyright 2026 The tenbed Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tenbed {

// Base of every error thrown by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A layer/task configuration that cannot be realised (q^n < d, missing
// morphology for a morphological method, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Word id or word string outside the table.
class LookupError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateWord : public Error {
 public:
  DuplicateWord(const std::string& word, std::size_t line)
      : Error("duplicate word '" + word + "' at line " + std::to_string(line)),
        word_(word) {}

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

// Training diverged (NaN/inf loss).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tenbed

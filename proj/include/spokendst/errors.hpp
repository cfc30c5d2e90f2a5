// Copyright 2026 The spokendst Authors
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

#ifndef SPOKENDST_ERRORS_HPP
#define SPOKENDST_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spokendst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input to a pure operation (e.g. a digit reaching G2P).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's documented domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A resource file (lexicon, feature table, rules, ontology) failed to load
/// or violates its format.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A phoneme symbol missing from the feature table.
class TableError : public Error {
 public:
  using Error::Error;
};

/// One or more problems found while ingesting gold or prediction files. All
/// problems are collected before this is thrown.
class IngestionError : public Error {
 public:
  explicit IngestionError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += '\n';
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace spokendst

#endif  // SPOKENDST_ERRORS_HPP

// Copyright 2026 The dvdq Authors. All Rights Reserved.
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

namespace dvdq {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes (bad magic, truncated payload, unparsable header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that this library does not handle (dtype, layout, version).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Argument or invariant violation (shape mismatch, NaN payload, bad config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dvdq

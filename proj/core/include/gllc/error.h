// Copyright 2026 The GLLC Authors. All Rights Reserved.
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

#ifndef GLLC_ERROR_H_
#define GLLC_ERROR_H_

#include <stdexcept>
#include <string>

namespace gllc {

// Base class for every recoverable failure raised by the library. Callers
// that only need to distinguish "bad input" from programming errors can catch
// this type; std::logic_error is reserved for violated internal contracts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor dimensions do not satisfy an operation's shape contract.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter is outside its domain (non-positive scale, etc).
class ParamError : public Error {
 public:
  using Error::Error;
};

// Model or fit configuration is invalid or does not match stored data.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A serialized artifact (weight file, bitstream) is malformed or corrupt.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The entropy decoder ran out of input or produced an impossible state.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// An object was used before it was initialized (e.g. an unfitted model).
class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gllc

#endif  // GLLC_ERROR_H_

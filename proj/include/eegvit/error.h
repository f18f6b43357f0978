// Copyright 2026 The eegvit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef EEGVIT_ERROR_H_
#define EEGVIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace eegvit {

enum class ErrorKind {
  kNonFinite,
  kOutOfRange,
  kTooFewItems,
  kBadRange,
  kBadSize,
  kBadShape,
  kUnknownSubset,
  kDegenerateData,
  kBadK,
  kEmptyData,
  kBadConfig,
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kChecksumMismatch,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// All library failures are reported as Error; kind() lets callers map them
// to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // True for failures of the numerics rather than of the inputs.
  bool numerical() const { return kind_ == ErrorKind::kNonFinite; }

 private:
  ErrorKind kind_;
};

}  // namespace eegvit

#endif  // EEGVIT_ERROR_H_

// Copyright 2026 The edhoc-lab Authors
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
#include <string_view>

namespace edhoc {

enum class ErrorCode {
  // codec
  kFieldTooLong,
  kTruncated,
  kMalformed,
  kTrailingBytes,
  // crypto
  kInvalidPoint,
  kWrongKeyKind,
  kAeadAuthFailure,
  kLengthTooLarge,
  kInvalidArgument,
  // protocol / auth
  kConfigInconsistent,
  kSuiteRejected,
  kMethodRejected,
  kMalformedEad,
  kAuthFailure,
  kUnknownCredential,
  kDecryptFailure,
  kKindMismatch,
  kNotCompleted,
  kUnexpectedMessage,
  // netsim
  kUnknownEndpoint,
  kPayloadTooLarge,
  kRuleConflict,
  kUnknownRule,
  // escrow
  kDuplicateRecipient,
  kNotARecipient,
  kInsufficientShares,
};

/// Stable upper-snake-case name, used in JSON output and logs.
std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
/// Anything else escaping a library call is a bug.
class EdhocError : public std::runtime_error {
 public:
  EdhocError(ErrorCode code, const std::string& detail);
  explicit EdhocError(ErrorCode code);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail = {});

}  // namespace edhoc

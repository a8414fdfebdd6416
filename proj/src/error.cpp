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

#include "edhoc/error.hpp"

namespace edhoc {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFieldTooLong: return "FIELD_TOO_LONG";
    case ErrorCode::kTruncated: return "TRUNCATED";
    case ErrorCode::kMalformed: return "MALFORMED";
    case ErrorCode::kTrailingBytes: return "TRAILING_BYTES";
    case ErrorCode::kInvalidPoint: return "INVALID_POINT";
    case ErrorCode::kWrongKeyKind: return "WRONG_KEY_KIND";
    case ErrorCode::kAeadAuthFailure: return "AEAD_AUTH_FAILURE";
    case ErrorCode::kLengthTooLarge: return "LENGTH_TOO_LARGE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kConfigInconsistent: return "CONFIG_INCONSISTENT";
    case ErrorCode::kSuiteRejected: return "SUITE_REJECTED";
    case ErrorCode::kMethodRejected: return "METHOD_REJECTED";
    case ErrorCode::kMalformedEad: return "MALFORMED_EAD";
    case ErrorCode::kAuthFailure: return "AUTH_FAILURE";
    case ErrorCode::kUnknownCredential: return "UNKNOWN_CREDENTIAL";
    case ErrorCode::kDecryptFailure: return "DECRYPT_FAILURE";
    case ErrorCode::kKindMismatch: return "KIND_MISMATCH";
    case ErrorCode::kNotCompleted: return "NOT_COMPLETED";
    case ErrorCode::kUnexpectedMessage: return "UNEXPECTED_MESSAGE";
    case ErrorCode::kUnknownEndpoint: return "UNKNOWN_ENDPOINT";
    case ErrorCode::kPayloadTooLarge: return "PAYLOAD_TOO_LARGE";
    case ErrorCode::kRuleConflict: return "RULE_CONFLICT";
    case ErrorCode::kUnknownRule: return "UNKNOWN_RULE";
    case ErrorCode::kDuplicateRecipient: return "DUPLICATE_RECIPIENT";
    case ErrorCode::kNotARecipient: return "NOT_A_RECIPIENT";
    case ErrorCode::kInsufficientShares: return "INSUFFICIENT_SHARES";
  }
  return "UNKNOWN";
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail) {
  std::string msg(error_name(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

EdhocError::EdhocError(ErrorCode code, const std::string& detail)
    : std::runtime_error(format_message(code, detail)), code_(code) {}

EdhocError::EdhocError(ErrorCode code) : EdhocError(code, {}) {}

void raise(ErrorCode code, const std::string& detail) { throw EdhocError(code, detail); }

}  // namespace edhoc

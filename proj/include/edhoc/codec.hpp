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

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "edhoc/bytes.hpp"

namespace edhoc {

inline constexpr std::size_t kMaxConnectionIdLength = 8;
inline constexpr std::size_t kMaxKidLength = 16;
inline constexpr int kMaxMethod = 4;
/// Bound on G_X / G_Y when the suite is unknown (uncompressed P-521 point).
inline constexpr std::size_t kMaxUnknownSuiteKeyLength = 133;
inline constexpr std::int64_t kMaxEadLabel = std::numeric_limits<std::int32_t>::max();

struct ConnectionId {
  Bytes value;

  bool valid() const { return !value.empty() && value.size() <= kMaxConnectionIdLength; }
  friend bool operator==(const ConnectionId&, const ConnectionId&) = default;
};

/// External authorization data. The label is a positive number; on the wire
/// a critical item carries the negated label.
struct EadItem {
  std::int64_t label = 1;
  bool critical = false;
  Bytes value;

  friend bool operator==(const EadItem&, const EadItem&) = default;
};

using EadList = std::vector<EadItem>;

struct Message1 {
  int method = 0;
  int suite = 0;
  Bytes g_x;
  ConnectionId c_i;
  EadList ead_1;

  friend bool operator==(const Message1&, const Message1&) = default;
};

struct Message2 {
  Bytes g_y;
  ConnectionId c_r;
  Bytes ciphertext_2;

  friend bool operator==(const Message2&, const Message2&) = default;
};

struct Message3 {
  Bytes ciphertext_3;

  friend bool operator==(const Message3&, const Message3&) = default;
};

struct Message4 {
  Bytes ciphertext_4;

  friend bool operator==(const Message4&, const Message4&) = default;
};

using EdhocMessage = std::variant<Message1, Message2, Message3, Message4>;

inline int round_of(const EdhocMessage& m) { return static_cast<int>(m.index()) + 1; }

Bytes encode(const Message1& m);
Bytes encode(const Message2& m);
Bytes encode(const Message3& m);
Bytes encode(const Message4& m);
Bytes encode(const EdhocMessage& m);

/// Throws EdhocError with TRUNCATED, MALFORMED or TRAILING_BYTES; never
/// anything else for any input.
EdhocMessage decode(int round, ByteView wire);
Message1 decode_message1(ByteView wire);
Message2 decode_message2(ByteView wire);
Message3 decode_message3(ByteView wire);
Message4 decode_message4(ByteView wire);

// ---- protected plaintexts --------------------------------------------------

enum class CredentialKind : std::uint8_t { kSignature = 0, kStaticDh = 1, kPsk = 2 };

std::string_view credential_kind_name(CredentialKind kind);

/// Credential presented by value: kind plus public key (or, for a PSK, the
/// key itself).
struct CredentialValue {
  CredentialKind kind = CredentialKind::kSignature;
  Bytes material;

  friend bool operator==(const CredentialValue&, const CredentialValue&) = default;
};

/// ID_CRED on the wire: a bare kid (by reference), or the kid plus the
/// credential itself.
struct IdCred {
  Bytes kid;
  std::optional<CredentialValue> value;

  friend bool operator==(const IdCred&, const IdCred&) = default;
};

/// Content of ciphertext_2 and ciphertext_3.
struct AuthPlaintext {
  IdCred id_cred;
  Bytes sig_or_mac;
  EadList ead;

  friend bool operator==(const AuthPlaintext&, const AuthPlaintext&) = default;
};

/// Content of ciphertext_4.
struct Plaintext4 {
  Bytes mac_4;
  EadList ead_4;

  friend bool operator==(const Plaintext4&, const Plaintext4&) = default;
};

Bytes encode(const IdCred& id_cred);
Bytes encode(const AuthPlaintext& p);
Bytes encode(const Plaintext4& p);
Bytes encode_ead(const EadList& ead);

AuthPlaintext decode_auth_plaintext(ByteView wire);
Plaintext4 decode_plaintext4(ByteView wire);

}  // namespace edhoc

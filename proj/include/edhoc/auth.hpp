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

#include <map>
#include <optional>
#include <vector>

#include "edhoc/bytes.hpp"
#include "edhoc/codec.hpp"
#include "edhoc/crypto.hpp"

namespace edhoc {

enum class Role { kInitiator, kResponder };

std::string_view role_name(Role role);

/// Long-term authentication credential. `public_key` is empty for a PSK;
/// `secret` holds the private key (or the PSK itself) when this party owns,
/// escrowed, or has compromised the credential.
struct Credential {
  Bytes id_cred;
  CredentialKind kind = CredentialKind::kSignature;
  Bytes public_key;
  std::optional<Bytes> secret;

  /// CRED: the blob covered by signatures and MACs. Never contains secrets.
  Bytes cred() const;

  /// Copy with the secret stripped, except for a PSK where the key is the
  /// credential and must be kept to verify anything.
  Credential public_part() const;

  /// Wire form: kid alone, or kid plus kind and material.
  IdCred to_id_cred(bool by_value) const;

  /// Signing key view. Throws WRONG_KEY_KIND for non-signature credentials
  /// and KIND_MISMATCH when no secret is present.
  KeyPair signing_key() const;

  friend bool operator==(const Credential&, const Credential&) = default;
};

Credential make_signature_credential(const CryptoProvider& provider, ByteView kid, ByteView seed);
Credential make_static_dh_credential(const CryptoProvider& provider, ByteView kid, ByteView seed);
Credential make_psk_credential(ByteView kid, ByteView psk);

/// Immutable after setup; lookups are by exact kid.
class CredentialStore {
 public:
  CredentialStore() = default;
  CredentialStore(std::initializer_list<Credential> creds);

  /// Throws INVALID_ARGUMENT on duplicate kid.
  void add(Credential cred);
  /// Replaces or inserts.
  void put(Credential cred);
  const Credential* find(ByteView kid) const;
  std::size_t size() const { return entries_.size(); }
  std::vector<Credential> entries() const;

 private:
  std::map<Bytes, Credential> entries_;
};

enum class TrustMode { kStrict, kWeakAccept };

struct TrustPolicy {
  TrustMode mode = TrustMode::kStrict;

  static TrustPolicy strict() { return {TrustMode::kStrict}; }
  static TrustPolicy weak_accept() { return {TrustMode::kWeakAccept}; }
  friend bool operator==(const TrustPolicy&, const TrustPolicy&) = default;
};

std::string_view trust_mode_name(TrustMode mode);

/// Result of resolving a peer's ID_CRED. `verified` is false when the
/// credential came off the wire under WeakAccept rather than from the store.
struct ResolvedCredential {
  Credential credential;
  bool verified = true;
};

/// Strict: the stored credential or UNKNOWN_CREDENTIAL.
/// WeakAccept: the stored credential if any, else the by-value credential
/// from the wire flagged unverified; a bare unknown kid is still
/// UNKNOWN_CREDENTIAL. Material that does not fit the suite is MALFORMED.
ResolvedCredential resolve(const CredentialStore& store, const IdCred& id_cred, TrustPolicy policy,
                           const CipherSuite& suite);

// ---- authentication methods ------------------------------------------------

/// Key kind each role authenticates with under a method (0..4).
CredentialKind required_kind(int method, Role role);

/// True when (method, role) authenticates with a signature rather than a MAC.
bool uses_signature(int method, Role role);

/// Fields bound by Signature_or_MAC_2 / _3, plus the MAC computed from the
/// key schedule.
struct AuthInput {
  Bytes id_cred;  // encoded ID_CRED
  Bytes transcript;
  Bytes cred;
  Bytes ead;  // encoded EAD items
  Bytes mac;
};

/// Data a signature covers. Also the MAC context minus the MAC.
Bytes to_be_signed(const AuthInput& in);
Bytes mac_context(const AuthInput& in);

/// Signature over (ID_CRED, TH, CRED, EAD, MAC) for signature cells, the MAC
/// itself otherwise. Throws KIND_MISMATCH when `own` does not fit the cell.
Bytes build_sig_or_mac(const CryptoProvider& provider, int method, Role role, const Credential& own,
                       const AuthInput& in);

struct VerifiedIdentity {
  Credential credential;
  bool verified = true;
};

/// Checks a peer's Signature_or_MAC. Throws AUTH_FAILURE on a bad value or a
/// credential of the wrong kind for the cell.
VerifiedIdentity verify_sig_or_mac(const CryptoProvider& provider, int method, Role peer_role,
                                   const ResolvedCredential& peer, ByteView payload, const AuthInput& in);

}  // namespace edhoc

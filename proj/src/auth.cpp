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

#include "edhoc/auth.hpp"

#include <sodium.h>

#include "edhoc/cbor.hpp"
#include "edhoc/error.hpp"

namespace edhoc {

std::string_view role_name(Role role) { return role == Role::kInitiator ? "initiator" : "responder"; }

std::string_view trust_mode_name(TrustMode mode) { return mode == TrustMode::kStrict ? "strict" : "weak-accept"; }

Bytes Credential::cred() const {
  cbor::Writer w;
  w.uint(static_cast<std::uint8_t>(kind)).bytes(id_cred).bytes(public_key);
  return std::move(w).take();
}

Credential Credential::public_part() const {
  Credential out = *this;
  if (kind != CredentialKind::kPsk) out.secret.reset();
  return out;
}

IdCred Credential::to_id_cred(bool by_value) const {
  IdCred out{id_cred, std::nullopt};
  if (by_value) {
    if (kind == CredentialKind::kPsk) {
      if (!secret) raise(ErrorCode::kKindMismatch, "PSK by value needs the key");
      out.value = CredentialValue{kind, *secret};
    } else {
      out.value = CredentialValue{kind, public_key};
    }
  }
  return out;
}

KeyPair Credential::signing_key() const {
  if (kind != CredentialKind::kSignature) raise(ErrorCode::kWrongKeyKind, "not a signature credential");
  if (!secret) raise(ErrorCode::kKindMismatch, "signature credential has no private key");
  return KeyPair{*secret, public_key, KeyKind::kSignature};
}

Credential make_signature_credential(const CryptoProvider& provider, ByteView kid, ByteView seed) {
  auto kp = provider.generate_keypair(KeyKind::kSignature, seed);
  return Credential{Bytes(kid.begin(), kid.end()), CredentialKind::kSignature, kp.public_key, kp.private_key};
}

Credential make_static_dh_credential(const CryptoProvider& provider, ByteView kid, ByteView seed) {
  auto kp = provider.generate_keypair(KeyKind::kStaticDh, seed);
  return Credential{Bytes(kid.begin(), kid.end()), CredentialKind::kStaticDh, kp.public_key, kp.private_key};
}

Credential make_psk_credential(ByteView kid, ByteView psk) {
  return Credential{Bytes(kid.begin(), kid.end()), CredentialKind::kPsk, {}, Bytes(psk.begin(), psk.end())};
}

CredentialStore::CredentialStore(std::initializer_list<Credential> creds) {
  for (const auto& c : creds) add(c);
}

void CredentialStore::add(Credential cred) {
  auto key = cred.id_cred;
  if (!entries_.emplace(std::move(key), std::move(cred)).second) {
    raise(ErrorCode::kInvalidArgument, "duplicate id_cred in store");
  }
}

void CredentialStore::put(Credential cred) {
  auto key = cred.id_cred;
  entries_.insert_or_assign(std::move(key), std::move(cred));
}

const Credential* CredentialStore::find(ByteView kid) const {
  auto it = entries_.find(Bytes(kid.begin(), kid.end()));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Credential> CredentialStore::entries() const {
  std::vector<Credential> out;
  out.reserve(entries_.size());
  for (const auto& [_, c] : entries_) out.push_back(c);
  return out;
}

namespace {

void check_wire_material(const CredentialValue& v, const CipherSuite& suite) {
  const bool ok = v.kind == CredentialKind::kPsk ? !v.material.empty() : v.material.size() == suite.ecdh_key_length;
  if (!ok) raise(ErrorCode::kMalformed, "credential material does not fit the suite");
}

}  // namespace

ResolvedCredential resolve(const CredentialStore& store, const IdCred& id_cred, TrustPolicy policy,
                           const CipherSuite& suite) {
  if (const auto* stored = store.find(id_cred.kid)) return {stored->public_part(), true};
  if (policy.mode == TrustMode::kStrict || !id_cred.value) {
    raise(ErrorCode::kUnknownCredential, "kid " + to_hex(id_cred.kid));
  }
  check_wire_material(*id_cred.value, suite);
  Credential c;
  c.id_cred = id_cred.kid;
  c.kind = id_cred.value->kind;
  if (c.kind == CredentialKind::kPsk) {
    c.secret = id_cred.value->material;
  } else {
    c.public_key = id_cred.value->material;
  }
  return {std::move(c), false};
}

CredentialKind required_kind(int method, Role role) {
  // Initiator key | Responder key
  //   0: signature | signature
  //   1: signature | static DH
  //   2: static DH | signature
  //   3: static DH | static DH
  //   4: PSK       | PSK
  const bool initiator = role == Role::kInitiator;
  switch (method) {
    case 0: return CredentialKind::kSignature;
    case 1: return initiator ? CredentialKind::kSignature : CredentialKind::kStaticDh;
    case 2: return initiator ? CredentialKind::kStaticDh : CredentialKind::kSignature;
    case 3: return CredentialKind::kStaticDh;
    case 4: return CredentialKind::kPsk;
    default: raise(ErrorCode::kMethodRejected, "method " + std::to_string(method));
  }
}

bool uses_signature(int method, Role role) { return required_kind(method, role) == CredentialKind::kSignature; }

Bytes mac_context(const AuthInput& in) {
  Bytes out = in.id_cred;
  cbor::Writer w;
  w.bytes(in.transcript).bytes(in.cred);
  append(out, w.data());
  append(out, in.ead);
  return out;
}

Bytes to_be_signed(const AuthInput& in) {
  Bytes out = mac_context(in);
  cbor::Writer w;
  w.bytes(in.mac);
  append(out, w.data());
  return out;
}

Bytes build_sig_or_mac(const CryptoProvider& provider, int method, Role role, const Credential& own,
                       const AuthInput& in) {
  if (own.kind != required_kind(method, role) || !own.secret) {
    raise(ErrorCode::kKindMismatch, "credential does not fit method " + std::to_string(method));
  }
  if (own.kind != CredentialKind::kSignature) return in.mac;
  return provider.sign(own.signing_key(), to_be_signed(in));
}

VerifiedIdentity verify_sig_or_mac(const CryptoProvider& provider, int method, Role peer_role,
                                   const ResolvedCredential& peer, ByteView payload, const AuthInput& in) {
  if (peer.credential.kind != required_kind(method, peer_role)) {
    raise(ErrorCode::kAuthFailure, "peer credential kind does not fit the method");
  }
  bool ok;
  if (uses_signature(method, peer_role)) {
    ok = provider.verify(peer.credential.public_key, to_be_signed(in), payload);
  } else {
    ok = payload.size() == in.mac.size() && sodium_memcmp(payload.data(), in.mac.data(), in.mac.size()) == 0;
  }
  if (!ok) raise(ErrorCode::kAuthFailure, std::string(role_name(peer_role)) + " Signature_or_MAC invalid");
  return {peer.credential, peer.verified};
}

}  // namespace edhoc

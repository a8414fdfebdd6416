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

#include "edhoc/codec.hpp"

#include <limits>
#include <string>

#include "edhoc/cbor.hpp"
#include "edhoc/crypto.hpp"
#include "edhoc/error.hpp"

namespace edhoc {

namespace {

// ---- encode-side checks ----------------------------------------------------

void check_connection_id(const ConnectionId& id, const char* name) {
  if (id.value.size() > kMaxConnectionIdLength) raise(ErrorCode::kFieldTooLong, name);
  if (id.value.empty()) raise(ErrorCode::kMalformed, std::string(name) + " is empty");
}

void check_public_key(int suite, ByteView key, const char* name) {
  if (const auto* s = find_suite(suite)) {
    if (key.size() > s->ecdh_key_length) raise(ErrorCode::kFieldTooLong, name);
    if (key.size() < s->ecdh_key_length) raise(ErrorCode::kMalformed, std::string(name) + " too short for suite");
  } else {
    if (key.size() > kMaxUnknownSuiteKeyLength) raise(ErrorCode::kFieldTooLong, name);
    if (key.empty()) raise(ErrorCode::kMalformed, std::string(name) + " is empty");
  }
}

void write_ead(cbor::Writer& w, const EadList& ead) {
  for (const auto& item : ead) {
    if (item.label < 1 || item.label > kMaxEadLabel) raise(ErrorCode::kMalformed, "EAD label out of range");
    w.integer(item.critical ? -item.label : item.label).bytes(item.value);
  }
}

Bytes finish(cbor::Writer&& w) {
  Bytes out = std::move(w).take();
  if (out.size() > kMaxMessageSize) raise(ErrorCode::kFieldTooLong, "message exceeds 4 KiB");
  return out;
}

void write_id_cred(cbor::Writer& w, const IdCred& id) {
  if (id.kid.size() > kMaxKidLength) raise(ErrorCode::kFieldTooLong, "kid");
  if (id.kid.empty()) raise(ErrorCode::kMalformed, "kid is empty");
  if (!id.value) {
    w.bytes(id.kid);
    return;
  }
  w.array(3).bytes(id.kid).uint(static_cast<std::uint8_t>(id.value->kind)).bytes(id.value->material);
}

// ---- decode-side helpers ---------------------------------------------------

void check_input_size(ByteView wire) {
  if (wire.size() > kMaxMessageSize) raise(ErrorCode::kMalformed, "input exceeds 4 KiB");
}

void expect_end(const cbor::Reader& r) {
  if (!r.at_end()) raise(ErrorCode::kTrailingBytes);
}

ConnectionId read_connection_id(cbor::Reader& r) {
  ConnectionId id{r.bytes()};
  if (!id.valid()) raise(ErrorCode::kMalformed, "connection identifier length");
  return id;
}

EadList read_ead_to_end(cbor::Reader& r) {
  EadList out;
  while (!r.at_end()) {
    const auto wire_label = r.integer();
    if (wire_label == 0 || wire_label > kMaxEadLabel || wire_label < -kMaxEadLabel) {
      raise(ErrorCode::kMalformed, "EAD label out of range");
    }
    EadItem item;
    item.critical = wire_label < 0;
    item.label = item.critical ? -wire_label : wire_label;
    item.value = r.bytes();
    out.push_back(std::move(item));
  }
  return out;
}

IdCred read_id_cred(cbor::Reader& r) {
  IdCred id;
  if (r.peek() == cbor::MajorType::kBytes) {
    id.kid = r.bytes();
  } else {
    if (r.array() != 3) raise(ErrorCode::kMalformed, "credential-by-value must have three elements");
    id.kid = r.bytes();
    const auto kind = r.uint();
    if (kind > static_cast<std::uint8_t>(CredentialKind::kPsk)) raise(ErrorCode::kMalformed, "credential kind");
    id.value = CredentialValue{static_cast<CredentialKind>(kind), r.bytes()};
  }
  if (id.kid.empty() || id.kid.size() > kMaxKidLength) raise(ErrorCode::kMalformed, "kid length");
  return id;
}

}  // namespace

Bytes encode(const Message1& m) {
  if (m.method < 0 || m.method > kMaxMethod) raise(ErrorCode::kMalformed, "method outside 0..4");
  if (m.suite < 0) raise(ErrorCode::kMalformed, "negative suite");
  check_public_key(m.suite, m.g_x, "G_X");
  check_connection_id(m.c_i, "C_I");
  cbor::Writer w;
  w.uint(static_cast<std::uint64_t>(m.method)).uint(static_cast<std::uint64_t>(m.suite)).bytes(m.g_x).bytes(m.c_i.value);
  write_ead(w, m.ead_1);
  return finish(std::move(w));
}

Bytes encode(const Message2& m) {
  if (m.g_y.size() > kMaxUnknownSuiteKeyLength) raise(ErrorCode::kFieldTooLong, "G_Y");
  if (m.g_y.empty()) raise(ErrorCode::kMalformed, "G_Y is empty");
  check_connection_id(m.c_r, "C_R");
  if (m.ciphertext_2.empty()) raise(ErrorCode::kMalformed, "ciphertext_2 is empty");
  cbor::Writer w;
  w.bytes(m.g_y).bytes(m.c_r.value).bytes(m.ciphertext_2);
  return finish(std::move(w));
}

Bytes encode(const Message3& m) {
  if (m.ciphertext_3.empty()) raise(ErrorCode::kMalformed, "ciphertext_3 is empty");
  cbor::Writer w;
  w.bytes(m.ciphertext_3);
  return finish(std::move(w));
}

Bytes encode(const Message4& m) {
  if (m.ciphertext_4.empty()) raise(ErrorCode::kMalformed, "ciphertext_4 is empty");
  cbor::Writer w;
  w.bytes(m.ciphertext_4);
  return finish(std::move(w));
}

Bytes encode(const EdhocMessage& m) {
  return std::visit([](const auto& inner) { return encode(inner); }, m);
}

Message1 decode_message1(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  Message1 m;
  const auto method = r.uint();
  if (method > kMaxMethod) raise(ErrorCode::kMalformed, "method outside 0..4");
  m.method = static_cast<int>(method);
  const auto suite = r.uint();
  if (suite > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) raise(ErrorCode::kMalformed, "suite");
  m.suite = static_cast<int>(suite);
  m.g_x = r.bytes();
  if (const auto* s = find_suite(m.suite)) {
    if (m.g_x.size() != s->ecdh_key_length) raise(ErrorCode::kMalformed, "G_X length does not match suite");
  } else if (m.g_x.empty() || m.g_x.size() > kMaxUnknownSuiteKeyLength) {
    raise(ErrorCode::kMalformed, "G_X length");
  }
  m.c_i = read_connection_id(r);
  m.ead_1 = read_ead_to_end(r);
  return m;
}

Message2 decode_message2(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  Message2 m;
  m.g_y = r.bytes();
  if (m.g_y.empty() || m.g_y.size() > kMaxUnknownSuiteKeyLength) raise(ErrorCode::kMalformed, "G_Y length");
  m.c_r = read_connection_id(r);
  m.ciphertext_2 = r.bytes();
  if (m.ciphertext_2.empty()) raise(ErrorCode::kMalformed, "ciphertext_2 is empty");
  expect_end(r);
  return m;
}

Message3 decode_message3(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  Message3 m{r.bytes()};
  if (m.ciphertext_3.empty()) raise(ErrorCode::kMalformed, "ciphertext_3 is empty");
  expect_end(r);
  return m;
}

Message4 decode_message4(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  Message4 m{r.bytes()};
  if (m.ciphertext_4.empty()) raise(ErrorCode::kMalformed, "ciphertext_4 is empty");
  expect_end(r);
  return m;
}

EdhocMessage decode(int round, ByteView wire) {
  switch (round) {
    case 1: return decode_message1(wire);
    case 2: return decode_message2(wire);
    case 3: return decode_message3(wire);
    case 4: return decode_message4(wire);
    default: raise(ErrorCode::kInvalidArgument, "round must be 1..4");
  }
}

std::string_view credential_kind_name(CredentialKind kind) {
  switch (kind) {
    case CredentialKind::kSignature: return "signature";
    case CredentialKind::kStaticDh: return "static-dh";
    case CredentialKind::kPsk: return "psk";
  }
  return "?";
}

Bytes encode(const IdCred& id_cred) {
  cbor::Writer w;
  write_id_cred(w, id_cred);
  return std::move(w).take();
}

Bytes encode(const AuthPlaintext& p) {
  cbor::Writer w;
  write_id_cred(w, p.id_cred);
  w.bytes(p.sig_or_mac);
  write_ead(w, p.ead);
  return finish(std::move(w));
}

Bytes encode(const Plaintext4& p) {
  cbor::Writer w;
  w.bytes(p.mac_4);
  write_ead(w, p.ead_4);
  return finish(std::move(w));
}

Bytes encode_ead(const EadList& ead) {
  cbor::Writer w;
  write_ead(w, ead);
  return std::move(w).take();
}

AuthPlaintext decode_auth_plaintext(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  AuthPlaintext p;
  p.id_cred = read_id_cred(r);
  p.sig_or_mac = r.bytes();
  p.ead = read_ead_to_end(r);
  return p;
}

Plaintext4 decode_plaintext4(ByteView wire) {
  check_input_size(wire);
  cbor::Reader r(wire);
  Plaintext4 p;
  p.mac_4 = r.bytes();
  p.ead_4 = read_ead_to_end(r);
  return p;
}

}  // namespace edhoc

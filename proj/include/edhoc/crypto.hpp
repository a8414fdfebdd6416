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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "edhoc/bytes.hpp"

namespace edhoc {

/// Byte lengths of every primitive in a cipher suite.
struct CipherSuite {
  int id;
  std::size_t ecdh_key_length;
  std::size_t signature_length;
  std::size_t aead_key_length;
  std::size_t aead_nonce_length;
  std::size_t aead_tag_length;
  std::size_t hash_length;
};

/// X25519, Ed25519, ChaCha20-Poly1305 (IETF), SHA-256, HKDF-SHA256.
inline constexpr CipherSuite kSuite0{0, 32, 64, 32, 12, 16, 32};

/// INSECURE. 31-bit multiplicative group DH, Schnorr signatures over the
/// same group, hash-based stream AEAD with an 8-byte tag. Exists so tests
/// can brute-force and hand-compute values; never use it for anything else.
inline constexpr CipherSuite kToySuite{255, 4, 8, 16, 8, 8, 32};

/// nullptr if the id names no shipped suite.
const CipherSuite* find_suite(int id);

enum class KeyKind { kEphemeralDh, kStaticDh, kSignature };

std::string_view key_kind_name(KeyKind kind);

struct KeyPair {
  Bytes private_key;
  Bytes public_key;
  KeyKind kind;
};

/// All primitives of one suite. Implementations are stateless apart from
/// instrumentation and safe to share across threads.
class CryptoProvider {
 public:
  virtual ~CryptoProvider() = default;

  virtual const CipherSuite& suite() const = 0;

  /// Deterministic in (kind, seed). Seed must be at least 16 bytes.
  virtual KeyPair generate_keypair(KeyKind kind, ByteView seed) const = 0;
  virtual Bytes public_from_private(KeyKind kind, ByteView private_key) const = 0;

  /// Throws INVALID_POINT when the peer key fails validation or the shared
  /// secret is degenerate.
  virtual Bytes ecdh(ByteView private_key, ByteView peer_public) const = 0;

  /// Throws WRONG_KEY_KIND unless key.kind is kSignature.
  virtual Bytes sign(const KeyPair& key, ByteView data) const = 0;
  virtual bool verify(ByteView public_key, ByteView data, ByteView signature) const = 0;

  virtual Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) const = 0;
  /// Throws AEAD_AUTH_FAILURE on any mismatch.
  virtual Bytes aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView ciphertext) const = 0;

  virtual Bytes hash(ByteView data) const = 0;
  virtual Bytes kdf_extract(ByteView salt, ByteView ikm) const = 0;
  /// Throws LENGTH_TOO_LARGE when length > 255 * hash_length.
  virtual Bytes kdf_expand(ByteView prk, ByteView info, std::size_t length) const = 0;

  /// Handshake MAC. Same construction as kdf_expand, kept as its own entry
  /// point so instrumentation can tell MACs apart from key derivation.
  virtual Bytes mac(ByteView prk, ByteView info, std::size_t length) const { return kdf_expand(prk, info, length); }
};

using ProviderPtr = std::shared_ptr<const CryptoProvider>;

/// Throws SUITE_REJECTED for unknown ids.
ProviderPtr make_provider(int suite_id);

/// HMAC-SHA256 based HKDF shared by both shipped suites.
Bytes hkdf_sha256_extract(ByteView salt, ByteView ikm);
Bytes hkdf_sha256_expand(ByteView prk, ByteView info, std::size_t length);
Bytes sha256(ByteView data);

enum class CryptoOp { kGenerate, kEcdh, kSign, kVerify, kSeal, kOpen, kHash, kExtract, kExpand, kMac };

std::string_view crypto_op_name(CryptoOp op);

/// Forwards to another provider and records every call in order.
class InstrumentedProvider final : public CryptoProvider {
 public:
  explicit InstrumentedProvider(ProviderPtr inner) : inner_(std::move(inner)) {}

  const CipherSuite& suite() const override { return inner_->suite(); }
  KeyPair generate_keypair(KeyKind kind, ByteView seed) const override;
  Bytes public_from_private(KeyKind kind, ByteView private_key) const override;
  Bytes ecdh(ByteView private_key, ByteView peer_public) const override;
  Bytes sign(const KeyPair& key, ByteView data) const override;
  bool verify(ByteView public_key, ByteView data, ByteView signature) const override;
  Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) const override;
  Bytes aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView ciphertext) const override;
  Bytes hash(ByteView data) const override;
  Bytes kdf_extract(ByteView salt, ByteView ikm) const override;
  Bytes kdf_expand(ByteView prk, ByteView info, std::size_t length) const override;
  Bytes mac(ByteView prk, ByteView info, std::size_t length) const override;

  std::vector<CryptoOp> calls() const;
  std::size_t count(CryptoOp op) const;
  void reset();

 private:
  void record(CryptoOp op) const;

  ProviderPtr inner_;
  mutable std::mutex mu_;
  mutable std::vector<CryptoOp> calls_;
};

}  // namespace edhoc

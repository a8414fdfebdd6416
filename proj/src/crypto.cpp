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

#include "edhoc/crypto.hpp"

#include <sodium.h>

#include <algorithm>

#include "crypto_impl.hpp"
#include "edhoc/error.hpp"

namespace edhoc {

const CipherSuite* find_suite(int id) {
  if (id == kSuite0.id) return &kSuite0;
  if (id == kToySuite.id) return &kToySuite;
  return nullptr;
}

std::string_view key_kind_name(KeyKind kind) {
  switch (kind) {
    case KeyKind::kEphemeralDh: return "ephemeral-dh";
    case KeyKind::kStaticDh: return "static-dh";
    case KeyKind::kSignature: return "signature";
  }
  return "?";
}

ProviderPtr make_provider(int suite_id) {
  detail::ensure_sodium();
  if (suite_id == kSuite0.id) return detail::make_sodium_provider();
  if (suite_id == kToySuite.id) return detail::make_toy_provider();
  raise(ErrorCode::kSuiteRejected, "suite " + std::to_string(suite_id));
}

Bytes sha256(ByteView data) {
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

namespace {

Bytes hmac_sha256(ByteView key, ByteView data) {
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  Bytes out(crypto_auth_hmacsha256_BYTES);
  crypto_auth_hmacsha256_final(&st, out.data());
  sodium_memzero(&st, sizeof st);
  return out;
}

}  // namespace

Bytes hkdf_sha256_extract(ByteView salt, ByteView ikm) {
  // An absent salt is a string of HashLen zeros; HMAC pads short keys with
  // zeros, so passing the empty salt straight through is equivalent.
  return hmac_sha256(salt, ikm);
}

Bytes hkdf_sha256_expand(ByteView prk, ByteView info, std::size_t length) {
  constexpr std::size_t kHashLen = crypto_hash_sha256_BYTES;
  if (length > 255 * kHashLen) raise(ErrorCode::kLengthTooLarge, std::to_string(length) + " bytes");
  Bytes out;
  out.reserve(length);
  Bytes block;
  for (std::uint8_t counter = 1; out.size() < length; ++counter) {
    Bytes input = block;
    append(input, info);
    input.push_back(counter);
    block = hmac_sha256(prk, input);
    const std::size_t take = std::min(block.size(), length - out.size());
    out.insert(out.end(), block.begin(), block.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

std::string_view crypto_op_name(CryptoOp op) {
  switch (op) {
    case CryptoOp::kGenerate: return "generate";
    case CryptoOp::kEcdh: return "ecdh";
    case CryptoOp::kSign: return "sign";
    case CryptoOp::kVerify: return "verify";
    case CryptoOp::kSeal: return "seal";
    case CryptoOp::kOpen: return "open";
    case CryptoOp::kHash: return "hash";
    case CryptoOp::kExtract: return "extract";
    case CryptoOp::kExpand: return "expand";
    case CryptoOp::kMac: return "mac";
  }
  return "?";
}

void InstrumentedProvider::record(CryptoOp op) const {
  std::lock_guard lock(mu_);
  calls_.push_back(op);
}

std::vector<CryptoOp> InstrumentedProvider::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t InstrumentedProvider::count(CryptoOp op) const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(std::count(calls_.begin(), calls_.end(), op));
}

void InstrumentedProvider::reset() {
  std::lock_guard lock(mu_);
  calls_.clear();
}

KeyPair InstrumentedProvider::generate_keypair(KeyKind kind, ByteView seed) const {
  record(CryptoOp::kGenerate);
  return inner_->generate_keypair(kind, seed);
}

Bytes InstrumentedProvider::public_from_private(KeyKind kind, ByteView private_key) const {
  return inner_->public_from_private(kind, private_key);
}

Bytes InstrumentedProvider::ecdh(ByteView private_key, ByteView peer_public) const {
  record(CryptoOp::kEcdh);
  return inner_->ecdh(private_key, peer_public);
}

Bytes InstrumentedProvider::sign(const KeyPair& key, ByteView data) const {
  record(CryptoOp::kSign);
  return inner_->sign(key, data);
}

bool InstrumentedProvider::verify(ByteView public_key, ByteView data, ByteView signature) const {
  record(CryptoOp::kVerify);
  return inner_->verify(public_key, data, signature);
}

Bytes InstrumentedProvider::aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) const {
  record(CryptoOp::kSeal);
  return inner_->aead_seal(key, nonce, aad, plaintext);
}

Bytes InstrumentedProvider::aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView ciphertext) const {
  record(CryptoOp::kOpen);
  return inner_->aead_open(key, nonce, aad, ciphertext);
}

Bytes InstrumentedProvider::hash(ByteView data) const {
  record(CryptoOp::kHash);
  return inner_->hash(data);
}

Bytes InstrumentedProvider::kdf_extract(ByteView salt, ByteView ikm) const {
  record(CryptoOp::kExtract);
  return inner_->kdf_extract(salt, ikm);
}

Bytes InstrumentedProvider::kdf_expand(ByteView prk, ByteView info, std::size_t length) const {
  record(CryptoOp::kExpand);
  return inner_->kdf_expand(prk, info, length);
}

Bytes InstrumentedProvider::mac(ByteView prk, ByteView info, std::size_t length) const {
  record(CryptoOp::kMac);
  return inner_->mac(prk, info, length);
}

}  // namespace edhoc

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

// INSECURE toy suite. See kToySuite.

#include <sodium.h>

#include "crypto_impl.hpp"
#include "edhoc/error.hpp"

namespace edhoc::detail {

namespace {

constexpr std::uint64_t kPrime = 2147483647;  // 2^31 - 1
constexpr std::uint64_t kGenerator = 7;       // primitive root mod 2^31 - 1
constexpr std::uint64_t kOrder = kPrime - 1;

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  base %= kPrime;
  while (exp != 0) {
    if (exp & 1) result = result * base % kPrime;
    base = base * base % kPrime;
    exp >>= 1;
  }
  return result;
}

Bytes be32(std::uint64_t v) {
  return Bytes{static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
               static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

std::uint64_t read_be32(ByteView b) {
  if (b.size() != 4) raise(ErrorCode::kInvalidArgument, "toy suite values are 4 bytes");
  return (std::uint64_t{b[0]} << 24) | (std::uint64_t{b[1]} << 16) | (std::uint64_t{b[2]} << 8) | b[3];
}

std::uint64_t hash_to_u64(ByteView data) {
  const Bytes h = sha256(data);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | h[static_cast<std::size_t>(i)];
  return v;
}

bool valid_element(std::uint64_t v) { return v >= 2 && v <= kPrime - 2; }

Bytes keystream(ByteView key, ByteView nonce, std::size_t length) {
  Bytes out;
  for (std::uint32_t block = 0; out.size() < length; ++block) {
    Bytes in = concat({key, nonce, be32(block)});
    append(out, sha256(in));
  }
  out.resize(length);
  return out;
}

Bytes toy_tag(ByteView key, ByteView nonce, ByteView aad, ByteView ct) {
  Bytes mac_input = concat({nonce, be32(aad.size()), aad, ct});
  Bytes full(crypto_auth_hmacsha256_BYTES);
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, mac_input.data(), mac_input.size());
  crypto_auth_hmacsha256_final(&st, full.data());
  full.resize(kToySuite.aead_tag_length);
  return full;
}

class ToyProvider final : public CryptoProvider {
 public:
  const CipherSuite& suite() const override { return kToySuite; }

  KeyPair generate_keypair(KeyKind kind, ByteView seed) const override {
    if (seed.size() < kMinSeedLength) raise(ErrorCode::kInvalidArgument, "seed shorter than 16 bytes");
    Bytes input = to_bytes("edhoc-lab toy keygen/");
    append(input, to_bytes(key_kind_name(kind)));
    input.push_back('/');
    append(input, seed);
    const std::uint64_t x = 2 + hash_to_u64(input) % (kPrime - 3);
    Bytes priv = be32(x);
    Bytes pub = public_from_private(kind, priv);
    return KeyPair{std::move(priv), std::move(pub), kind};
  }

  Bytes public_from_private(KeyKind, ByteView private_key) const override {
    return be32(mod_pow(kGenerator, read_be32(private_key)));
  }

  Bytes ecdh(ByteView private_key, ByteView peer_public) const override {
    const auto x = read_be32(private_key);
    const auto peer = read_be32(peer_public);
    if (!valid_element(peer)) raise(ErrorCode::kInvalidPoint, "toy peer key outside [2, p-2]");
    const auto shared = mod_pow(peer, x);
    if (shared == 1) raise(ErrorCode::kInvalidPoint, "toy shared secret is the identity");
    return be32(shared);
  }

  Bytes sign(const KeyPair& key, ByteView data) const override {
    if (key.kind != KeyKind::kSignature) raise(ErrorCode::kWrongKeyKind, "sign needs a signature key");
    const auto x = read_be32(key.private_key);
    const auto k = 1 + hash_to_u64(concat({key.private_key, data})) % (kOrder - 1);
    const auto r = mod_pow(kGenerator, k);
    const auto e = hash_to_u64(concat({be32(r), key.public_key, data})) % kOrder;
    const auto s = (k + e * x % kOrder) % kOrder;
    return concat({be32(r), be32(s)});
  }

  bool verify(ByteView public_key, ByteView data, ByteView signature) const override {
    if (public_key.size() != 4 || signature.size() != 8) return false;
    const auto y = read_be32(public_key);
    const auto r = read_be32(signature.first(4));
    const auto s = read_be32(signature.subspan(4));
    if (r == 0 || r >= kPrime || s >= kOrder || !valid_element(y)) return false;
    const auto e = hash_to_u64(concat({signature.first(4), public_key, data})) % kOrder;
    return mod_pow(kGenerator, s) == r * mod_pow(y, e) % kPrime;
  }

  Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) const override {
    check_lengths(key, nonce);
    Bytes ct = keystream(key, nonce, plaintext.size());
    for (std::size_t i = 0; i < ct.size(); ++i) ct[i] ^= plaintext[i];
    append(ct, toy_tag(key, nonce, aad, ct));
    return ct;
  }

  Bytes aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView ciphertext) const override {
    check_lengths(key, nonce);
    if (ciphertext.size() < kToySuite.aead_tag_length) raise(ErrorCode::kAeadAuthFailure, "shorter than tag");
    const auto body = ciphertext.first(ciphertext.size() - kToySuite.aead_tag_length);
    const auto tag = ciphertext.last(kToySuite.aead_tag_length);
    const Bytes expected = toy_tag(key, nonce, aad, body);
    if (sodium_memcmp(expected.data(), tag.data(), tag.size()) != 0) raise(ErrorCode::kAeadAuthFailure);
    Bytes pt = keystream(key, nonce, body.size());
    for (std::size_t i = 0; i < pt.size(); ++i) pt[i] ^= body[i];
    return pt;
  }

  Bytes hash(ByteView data) const override { return sha256(data); }
  Bytes kdf_extract(ByteView salt, ByteView ikm) const override { return hkdf_sha256_extract(salt, ikm); }
  Bytes kdf_expand(ByteView prk, ByteView info, std::size_t length) const override {
    return hkdf_sha256_expand(prk, info, length);
  }

 private:
  static void check_lengths(ByteView key, ByteView nonce) {
    if (key.size() != kToySuite.aead_key_length || nonce.size() != kToySuite.aead_nonce_length) {
      raise(ErrorCode::kInvalidArgument, "toy AEAD key/nonce length");
    }
  }
};

}  // namespace

ProviderPtr make_toy_provider() {
  static const auto provider = std::make_shared<const ToyProvider>();
  return provider;
}

}  // namespace edhoc::detail

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

#include <sodium.h>

#include <mutex>

#include "crypto_impl.hpp"
#include "edhoc/error.hpp"

namespace edhoc::detail {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

namespace {

void expect_length(ByteView v, std::size_t n, const char* what) {
  if (v.size() != n) raise(ErrorCode::kInvalidArgument, std::string(what) + " has wrong length");
}

class SodiumProvider final : public CryptoProvider {
 public:
  const CipherSuite& suite() const override { return kSuite0; }

  KeyPair generate_keypair(KeyKind kind, ByteView seed) const override {
    if (seed.size() < kMinSeedLength) raise(ErrorCode::kInvalidArgument, "seed shorter than 16 bytes");
    // Domain-separate the kinds so one seed never yields related keys.
    Bytes input = to_bytes("edhoc-lab keygen/");
    append(input, to_bytes(key_kind_name(kind)));
    input.push_back('/');
    append(input, seed);
    Bytes priv = sha256(input);
    secure_wipe(input);
    Bytes pub = public_from_private(kind, priv);
    return KeyPair{std::move(priv), std::move(pub), kind};
  }

  Bytes public_from_private(KeyKind kind, ByteView private_key) const override {
    expect_length(private_key, 32, "private key");
    if (kind == KeyKind::kSignature) {
      Bytes pk(crypto_sign_PUBLICKEYBYTES);
      Bytes sk(crypto_sign_SECRETKEYBYTES);
      crypto_sign_seed_keypair(pk.data(), sk.data(), private_key.data());
      secure_wipe(sk);
      return pk;
    }
    Bytes pk(crypto_scalarmult_BYTES);
    crypto_scalarmult_base(pk.data(), private_key.data());
    return pk;
  }

  Bytes ecdh(ByteView private_key, ByteView peer_public) const override {
    expect_length(private_key, crypto_scalarmult_SCALARBYTES, "private key");
    expect_length(peer_public, crypto_scalarmult_BYTES, "peer public key");
    Bytes out(crypto_scalarmult_BYTES);
    // libsodium refuses low-order points by reporting an all-zero output.
    if (crypto_scalarmult(out.data(), private_key.data(), peer_public.data()) != 0) {
      raise(ErrorCode::kInvalidPoint, "X25519 produced the all-zero shared secret");
    }
    return out;
  }

  Bytes sign(const KeyPair& key, ByteView data) const override {
    if (key.kind != KeyKind::kSignature) raise(ErrorCode::kWrongKeyKind, "sign needs a signature key");
    expect_length(key.private_key, crypto_sign_SEEDBYTES, "signature seed");
    Bytes pk(crypto_sign_PUBLICKEYBYTES);
    Bytes sk(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(pk.data(), sk.data(), key.private_key.data());
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, data.data(), data.size(), sk.data());
    secure_wipe(sk);
    return sig;
  }

  bool verify(ByteView public_key, ByteView data, ByteView signature) const override {
    if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) return false;
    return crypto_sign_verify_detached(signature.data(), data.data(), data.size(), public_key.data()) == 0;
  }

  Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) const override {
    expect_length(key, crypto_aead_chacha20poly1305_ietf_KEYBYTES, "AEAD key");
    expect_length(nonce, crypto_aead_chacha20poly1305_ietf_NPUBBYTES, "AEAD nonce");
    Bytes out(plaintext.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
    unsigned long long out_len = 0;
    crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &out_len, plaintext.data(), plaintext.size(), aad.data(),
                                              aad.size(), nullptr, nonce.data(), key.data());
    out.resize(static_cast<std::size_t>(out_len));
    return out;
  }

  Bytes aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView ciphertext) const override {
    expect_length(key, crypto_aead_chacha20poly1305_ietf_KEYBYTES, "AEAD key");
    expect_length(nonce, crypto_aead_chacha20poly1305_ietf_NPUBBYTES, "AEAD nonce");
    if (ciphertext.size() < crypto_aead_chacha20poly1305_ietf_ABYTES) {
      raise(ErrorCode::kAeadAuthFailure, "ciphertext shorter than the tag");
    }
    Bytes out(ciphertext.size() - crypto_aead_chacha20poly1305_ietf_ABYTES);
    unsigned long long out_len = 0;
    if (crypto_aead_chacha20poly1305_ietf_decrypt(out.data(), &out_len, nullptr, ciphertext.data(), ciphertext.size(),
                                                  aad.data(), aad.size(), nonce.data(), key.data()) != 0) {
      raise(ErrorCode::kAeadAuthFailure);
    }
    out.resize(static_cast<std::size_t>(out_len));
    return out;
  }

  Bytes hash(ByteView data) const override { return sha256(data); }
  Bytes kdf_extract(ByteView salt, ByteView ikm) const override { return hkdf_sha256_extract(salt, ikm); }
  Bytes kdf_expand(ByteView prk, ByteView info, std::size_t length) const override {
    return hkdf_sha256_expand(prk, info, length);
  }
};

}  // namespace

ProviderPtr make_sodium_provider() {
  static const auto provider = std::make_shared<const SodiumProvider>();
  return provider;
}

}  // namespace edhoc::detail

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

#include <gtest/gtest.h>

#include <set>
#include <thread>
#include <unordered_map>

#include "edhoc/crypto.hpp"
#include "edhoc/error.hpp"
#include "test_support.hpp"

namespace edhoc {
namespace {

using test::load_vectors;
using test::vector_section;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const EdhocError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

Bytes seed_of(int i) { return derive_seed(static_cast<std::uint64_t>(i), "crypto-test"); }

class ProviderTest : public ::testing::TestWithParam<int> {
 protected:
  ProviderPtr p = make_provider(GetParam());
  const CipherSuite& suite() const { return p->suite(); }
};

INSTANTIATE_TEST_SUITE_P(Suites, ProviderTest, ::testing::Values(0, 255),
                         [](const auto& info) { return "suite" + std::to_string(info.param); });

TEST_P(ProviderTest, KeygenDeterministicAndDistinct) {
  const auto a = p->generate_keypair(KeyKind::kStaticDh, seed_of(1));
  const auto b = p->generate_keypair(KeyKind::kStaticDh, seed_of(1));
  EXPECT_EQ(a.private_key, b.private_key);
  EXPECT_EQ(a.public_key, b.public_key);
  EXPECT_EQ(a.public_key.size(), suite().ecdh_key_length);
  EXPECT_EQ(p->public_from_private(a.kind, a.private_key), a.public_key);

  std::set<Bytes> publics;
  for (int i = 0; i < 1000; ++i) publics.insert(p->generate_keypair(KeyKind::kEphemeralDh, seed_of(i)).public_key);
  EXPECT_EQ(publics.size(), 1000u);
  // Kinds are domain-separated.
  EXPECT_NE(p->generate_keypair(KeyKind::kEphemeralDh, seed_of(1)).private_key, a.private_key);
  EXPECT_EQ(code_of([&] { p->generate_keypair(KeyKind::kStaticDh, Bytes(15, 1)); }), ErrorCode::kInvalidArgument);
}

TEST_P(ProviderTest, DhSymmetry) {
  for (int i = 0; i < 1000; ++i) {
    const auto a = p->generate_keypair(KeyKind::kEphemeralDh, seed_of(2 * i));
    const auto b = p->generate_keypair(KeyKind::kEphemeralDh, seed_of(2 * i + 1));
    ASSERT_EQ(p->ecdh(a.private_key, b.public_key), p->ecdh(b.private_key, a.public_key)) << i;
  }
}

TEST_P(ProviderTest, DegeneratePeerKeysRejected) {
  const auto a = p->generate_keypair(KeyKind::kEphemeralDh, seed_of(3));
  EXPECT_EQ(code_of([&] { p->ecdh(a.private_key, Bytes(suite().ecdh_key_length, 0)); }), ErrorCode::kInvalidPoint);
  if (suite().id == 0) {
    // Order-8 point from the X25519 low-order blacklist.
    const Bytes low = from_hex("e0eb7a7c3b41b8ae1656e3faf19fc46ada098deb9c32b1fd866205165f49b800");
    EXPECT_EQ(code_of([&] { p->ecdh(a.private_key, low); }), ErrorCode::kInvalidPoint);
  } else {
    EXPECT_EQ(code_of([&] { p->ecdh(a.private_key, from_hex("00000001")); }), ErrorCode::kInvalidPoint);
    EXPECT_EQ(code_of([&] { p->ecdh(a.private_key, from_hex("7ffffffe")); }), ErrorCode::kInvalidPoint);
  }
}

TEST_P(ProviderTest, SignVerifyAndEveryBitFlip) {
  const auto k = p->generate_keypair(KeyKind::kSignature, seed_of(4));
  const Bytes msg = concat({derive_seed(4, "msg-a"), derive_seed(4, "msg-b")});  // 64 bytes
  const Bytes sig = p->sign(k, msg);
  ASSERT_EQ(sig.size(), suite().signature_length);
  EXPECT_TRUE(p->verify(k.public_key, msg, sig));
  for (std::size_t bit = 0; bit < msg.size() * 8; ++bit) {
    Bytes m = msg;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ASSERT_FALSE(p->verify(k.public_key, m, sig)) << "message bit " << bit;
  }
  for (std::size_t bit = 0; bit < sig.size() * 8; ++bit) {
    Bytes s = sig;
    s[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ASSERT_FALSE(p->verify(k.public_key, msg, s)) << "signature bit " << bit;
  }
  const auto other = p->generate_keypair(KeyKind::kSignature, seed_of(5));
  EXPECT_FALSE(p->verify(other.public_key, msg, sig));
  EXPECT_EQ(code_of([&] { p->sign(p->generate_keypair(KeyKind::kStaticDh, seed_of(4)), msg); }),
            ErrorCode::kWrongKeyKind);
}

TEST_P(ProviderTest, AeadRoundTripAndTamper) {
  const Bytes key(suite().aead_key_length, 0x42);
  const Bytes nonce(suite().aead_nonce_length, 0x24);
  const Bytes aad = to_bytes("header");
  const Bytes pt = to_bytes("short example");

  const Bytes empty = p->aead_seal(key, nonce, aad, {});
  EXPECT_EQ(empty.size(), suite().aead_tag_length);
  EXPECT_TRUE(p->aead_open(key, nonce, aad, empty).empty());

  const Bytes ct = p->aead_seal(key, nonce, aad, pt);
  EXPECT_EQ(ct.size(), pt.size() + suite().aead_tag_length);
  EXPECT_EQ(p->aead_open(key, nonce, aad, ct), pt);

  auto flips = [](const Bytes& b) {
    std::vector<Bytes> out;
    for (std::size_t bit = 0; bit < b.size() * 8; ++bit) {
      out.push_back(b);
      out.back()[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    }
    return out;
  };
  for (const auto& c : flips(ct)) EXPECT_EQ(code_of([&] { p->aead_open(key, nonce, aad, c); }), ErrorCode::kAeadAuthFailure);
  for (const auto& a : flips(aad)) EXPECT_EQ(code_of([&] { p->aead_open(key, nonce, a, ct); }), ErrorCode::kAeadAuthFailure);
  for (const auto& k : flips(key)) EXPECT_EQ(code_of([&] { p->aead_open(k, nonce, aad, ct); }), ErrorCode::kAeadAuthFailure);
  for (const auto& n : flips(nonce)) EXPECT_EQ(code_of([&] { p->aead_open(key, n, aad, ct); }), ErrorCode::kAeadAuthFailure);
  EXPECT_EQ(code_of([&] { p->aead_open(key, nonce, aad, Bytes(suite().aead_tag_length - 1, 0)); }),
            ErrorCode::kAeadAuthFailure);
}

TEST_P(ProviderTest, KdfBounds) {
  const Bytes prk = p->kdf_extract(to_bytes("salt"), to_bytes("ikm"));
  EXPECT_EQ(prk.size(), suite().hash_length);
  EXPECT_TRUE(p->kdf_expand(prk, to_bytes("x"), 0).empty());
  EXPECT_EQ(p->kdf_expand(prk, to_bytes("x"), 255 * suite().hash_length).size(), 255 * suite().hash_length);
  EXPECT_EQ(code_of([&] { p->kdf_expand(prk, to_bytes("x"), 255 * suite().hash_length + 1); }),
            ErrorCode::kLengthTooLarge);
  std::set<Bytes> outs;
  for (int i = 0; i < 1000; ++i) outs.insert(p->kdf_expand(prk, derive_seed(i, "info"), 32));
  EXPECT_EQ(outs.size(), 1000u);
}

// ---- published vectors -------------------------------------------------------

TEST(Vectors, X25519Rfc7748) {
  const auto v = vector_section("primitives.hex", "x25519 rfc7748");
  const auto p = make_provider(0);
  EXPECT_EQ(p->public_from_private(KeyKind::kStaticDh, v.hex("alice_private")), v.hex("alice_public"));
  EXPECT_EQ(p->public_from_private(KeyKind::kStaticDh, v.hex("bob_private")), v.hex("bob_public"));
  EXPECT_EQ(p->ecdh(v.hex("alice_private"), v.hex("bob_public")), v.hex("shared"));
  EXPECT_EQ(p->ecdh(v.hex("bob_private"), v.hex("alice_public")), v.hex("shared"));
}

TEST(Vectors, Ed25519Rfc8032) {
  const auto p = make_provider(0);
  int seen = 0;
  for (const auto& v : load_vectors("primitives.hex")) {
    if (v.name.rfind("ed25519", 0) != 0) continue;
    ++seen;
    const KeyPair k{v.hex("seed"), v.hex("public"), KeyKind::kSignature};
    EXPECT_EQ(p->public_from_private(KeyKind::kSignature, k.private_key), k.public_key) << v.name;
    EXPECT_EQ(p->sign(k, v.hex("message")), v.hex("signature")) << v.name;
    EXPECT_TRUE(p->verify(k.public_key, v.hex("message"), v.hex("signature"))) << v.name;
  }
  EXPECT_EQ(seen, 3);
}

TEST(Vectors, ChaCha20Poly1305Rfc8439) {
  const auto v = vector_section("primitives.hex", "chacha20poly1305 rfc8439");
  const auto p = make_provider(0);
  EXPECT_EQ(p->aead_seal(v.hex("key"), v.hex("nonce"), v.hex("aad"), v.hex("plaintext")), v.hex("sealed"));
  EXPECT_EQ(p->aead_open(v.hex("key"), v.hex("nonce"), v.hex("aad"), v.hex("sealed")), v.hex("plaintext"));
}

TEST(Vectors, HkdfRfc5869) {
  int seen = 0;
  for (const auto& v : load_vectors("primitives.hex")) {
    if (v.name.rfind("hkdf", 0) != 0) continue;
    ++seen;
    EXPECT_EQ(hkdf_sha256_extract(v.hex("salt"), v.hex("ikm")), v.hex("prk")) << v.name;
    EXPECT_EQ(hkdf_sha256_expand(v.hex("prk"), v.hex("info"), v.number("length")), v.hex("okm")) << v.name;
  }
  EXPECT_EQ(seen, 3);
  const auto s = vector_section("primitives.hex", "sha256 abc");
  EXPECT_EQ(sha256(s.hex("message")), s.hex("digest"));
}

TEST(Vectors, SeedAndKeyDerivation) {
  for (const auto& v : load_vectors("derived.hex")) {
    if (v.name.rfind("derive_seed", 0) == 0) {
      const Bytes label = v.hex("label");
      EXPECT_EQ(derive_seed(v.number("seed"), std::string(label.begin(), label.end())), v.hex("output"));
    }
  }
  const auto p = make_provider(0);
  const std::pair<const char*, KeyKind> kinds[] = {{"keygen ephemeral-dh", KeyKind::kEphemeralDh},
                                                   {"keygen static-dh", KeyKind::kStaticDh},
                                                   {"keygen signature", KeyKind::kSignature}};
  for (const auto& [name, kind] : kinds) {
    const auto v = vector_section("derived.hex", name);
    const auto k = p->generate_keypair(kind, v.hex("seed"));
    EXPECT_EQ(k.private_key, v.hex("private")) << name;
    EXPECT_EQ(k.public_key, v.hex("public")) << name;
  }
}

// ---- toy suite -------------------------------------------------------------------

constexpr std::uint64_t kToyPrime = 2147483647;

std::uint64_t be32(ByteView b) { return (std::uint64_t{b[0]} << 24) | (b[1] << 16) | (b[2] << 8) | b[3]; }

// Baby-step giant-step over the whole 2^31 group: an independent way to get
// the private key back from a toy public key.
std::uint64_t toy_dlog(std::uint64_t y) {
  constexpr std::uint64_t m = 46341;  // ceil(sqrt(p - 1))
  std::unordered_map<std::uint64_t, std::uint64_t> baby;
  std::uint64_t e = 1;
  for (std::uint64_t j = 0; j < m; ++j, e = e * 7 % kToyPrime) baby.emplace(e, j);
  // 7^-m = 7^(p-1-m)
  std::uint64_t factor = 1, base = 7, exp = kToyPrime - 1 - m;
  for (; exp; exp >>= 1, base = base * base % kToyPrime) {
    if (exp & 1) factor = factor * base % kToyPrime;
  }
  std::uint64_t gamma = y;
  for (std::uint64_t i = 0; i < m; ++i, gamma = gamma * factor % kToyPrime) {
    if (auto it = baby.find(gamma); it != baby.end()) return i * m + it->second;
  }
  return 0;
}

TEST(ToySuite, PublishedByOracle) {
  const auto p = make_provider(255);
  int seen = 0;
  for (const auto& v : load_vectors("derived.hex")) {
    if (v.name.rfind("toy dh", 0) != 0) continue;
    ++seen;
    EXPECT_EQ(p->public_from_private(KeyKind::kEphemeralDh, v.hex("x")), v.hex("g_x")) << v.name;
    EXPECT_EQ(p->ecdh(v.hex("x"), v.hex("g_y")), v.hex("shared")) << v.name;
    EXPECT_EQ(p->ecdh(v.hex("y"), v.hex("g_x")), v.hex("shared")) << v.name;
  }
  EXPECT_EQ(seen, 3);
  const auto a = vector_section("derived.hex", "toy aead");
  EXPECT_EQ(p->aead_seal(a.hex("key"), a.hex("nonce"), a.hex("aad"), a.hex("plaintext")), a.hex("sealed"));
}

TEST(ToySuite, BruteForceRecoversKeysAndSecrets) {
  const auto p = make_provider(255);
  const auto a = p->generate_keypair(KeyKind::kEphemeralDh, seed_of(10));
  const auto b = p->generate_keypair(KeyKind::kEphemeralDh, seed_of(11));
  const std::uint64_t x = toy_dlog(be32(a.public_key));
  EXPECT_EQ(x, be32(a.private_key) % (kToyPrime - 1));
  // With the recovered exponent, anyone computes the shared secret.
  std::uint64_t shared = 1, base = be32(b.public_key), exp = x;
  for (; exp; exp >>= 1, base = base * base % kToyPrime) {
    if (exp & 1) shared = shared * base % kToyPrime;
  }
  EXPECT_EQ(shared, be32(p->ecdh(a.private_key, b.public_key)));
}

// ---- instrumentation and errors ----------------------------------------------------

TEST(Instrumented, RecordsEveryCallInOrder) {
  auto inner = make_provider(0);
  InstrumentedProvider p(inner);
  const auto k = p.generate_keypair(KeyKind::kSignature, seed_of(1));
  p.verify(k.public_key, Bytes{1}, p.sign(k, Bytes{1}));
  p.mac(Bytes(32, 1), Bytes{}, 32);
  p.hash(Bytes{});
  EXPECT_EQ(p.calls(), (std::vector<CryptoOp>{CryptoOp::kGenerate, CryptoOp::kSign, CryptoOp::kVerify,
                                               CryptoOp::kMac, CryptoOp::kHash}));
  EXPECT_EQ(p.count(CryptoOp::kSign), 1u);
  p.reset();
  EXPECT_TRUE(p.calls().empty());
}

TEST(Instrumented, SafeAcrossThreads) {
  InstrumentedProvider p(make_provider(0));
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&p] {
      for (int i = 0; i < 250; ++i) p.hash(Bytes{1, 2, 3});
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(p.count(CryptoOp::kHash), 1000u);
}

TEST(Provider, UnknownSuite) {
  EXPECT_EQ(code_of([] { make_provider(7); }), ErrorCode::kSuiteRejected);
  EXPECT_EQ(find_suite(7), nullptr);
  ASSERT_NE(find_suite(0), nullptr);
  EXPECT_EQ(find_suite(255)->ecdh_key_length, 4u);
}

}  // namespace
}  // namespace edhoc

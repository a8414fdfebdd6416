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

#include "edhoc/error.hpp"
#include "edhoc/protocol.hpp"
#include "edhoc/records.hpp"
#include "test_support.hpp"

namespace edhoc {
namespace {

using scenario::HandshakeOptions;
using test::direct_handshake;
using test::options;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const EdhocError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

struct Pair {
  SessionState i;
  SessionState r;
};

Pair fresh_pair(const HandshakeOptions& opt, ProviderPtr provider = nullptr) {
  if (!provider) provider = make_provider(opt.suite);
  const auto cast = scenario::cast_for(*provider, opt);
  return {make_initiator(scenario::initiator_config(cast, opt, provider)),
          make_responder(scenario::responder_config(cast, opt, provider))};
}

Bytes flip(ByteView b, std::size_t bit) {
  Bytes out(b.begin(), b.end());
  out[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
  return out;
}

// ---- oracle ---------------------------------------------------------------------

TEST(Handshake, MatchesIndependentOracleByteForByte) {
  for (int method = 0; method <= 4; ++method) {
    const auto v = test::vector_section("derived.hex", "handshake method " + std::to_string(method) + " seed 7");
    const auto run = direct_handshake(options(method, 7, 0, true));
    EXPECT_EQ(to_hex(run.m1), v.fields.at("message_1")) << method;
    EXPECT_EQ(to_hex(run.m2), v.fields.at("message_2")) << method;
    EXPECT_EQ(to_hex(run.m3), v.fields.at("message_3")) << method;
    EXPECT_EQ(to_hex(run.m4), v.fields.at("message_4")) << method;
    for (const auto* s : {&*run.initiator, &*run.responder}) {
      EXPECT_EQ(s->transcript().th_2, v.hex("th_2"));
      EXPECT_EQ(s->transcript().th_3, v.hex("th_3"));
      EXPECT_EQ(s->transcript().th_4, v.hex("th_4"));
      EXPECT_EQ(s->session_secret(), v.hex("prk_2e"));
      EXPECT_EQ(session_keys(*s).exporter_secret, v.hex("prk_exporter"));
      EXPECT_EQ(export_key(*s, to_bytes("test"), 16), v.hex("export_test_16"));
    }
    // The session secret is extract(TH_2, G_XY) with G_XY from the oracle's
    // own scalar multiplication.
    EXPECT_EQ(hkdf_sha256_extract(v.hex("th_2"), v.hex("g_xy")), run.initiator->session_secret());
  }
}

// ---- completeness ----------------------------------------------------------------

TEST(Handshake, EveryMethodCompletesOnBothSuites) {
  for (int suite : {0, 255}) {
    for (int method = 0; method <= 4; ++method) {
      for (bool m4 : {false, true}) {
        const auto run = direct_handshake(options(method, 100 + method, suite, m4));
        ASSERT_EQ(run.initiator->phase(), Phase::kCompleted);
        ASSERT_EQ(run.responder->phase(), Phase::kCompleted);
        EXPECT_EQ(run.m4.empty(), !m4);
        const auto ki = session_keys(*run.initiator);
        EXPECT_TRUE(ki.handshake_complete);
        EXPECT_EQ(ki.exporter_secret.size(), make_provider(suite)->suite().hash_length);
        EXPECT_EQ(ki.exporter_secret, session_keys(*run.responder).exporter_secret);
        EXPECT_EQ(export_key(*run.initiator, to_bytes("a2b"), 32), export_key(*run.responder, to_bytes("a2b"), 32));
        EXPECT_NE(export_key(*run.initiator, to_bytes("a2b"), 32), export_key(*run.initiator, to_bytes("b2a"), 32));
        EXPECT_TRUE(run.initiator->peer_authenticated());
        EXPECT_TRUE(run.responder->peer_authenticated());
        EXPECT_FALSE(run.initiator->peer_unverified());
      }
    }
  }
}

TEST(Handshake, DeterministicInTheSeed) {
  const auto a = direct_handshake(options(0, 5));
  const auto b = direct_handshake(options(0, 5));
  EXPECT_EQ(a.m1, b.m1);
  EXPECT_EQ(a.m3, b.m3);
  EXPECT_NE(a.m1, direct_handshake(options(0, 6)).m1);
}

TEST(Handshake, SessionKeysIndependentUnderFixedLongTermKeys) {
  std::set<Bytes> exporters;
  for (int s = 0; s < 50; ++s) {
    auto opt = options(3, 77);
    auto provider = make_provider(0);
    const auto cast = scenario::cast_for(*provider, opt);
    auto icfg = scenario::initiator_config(cast, opt, provider);
    auto rcfg = scenario::responder_config(cast, opt, provider);
    icfg.rng_seed = derive_seed(s, "independence/I");
    rcfg.rng_seed = derive_seed(s, "independence/R");
    auto i = make_initiator(icfg);
    auto r = make_responder(rcfg);
    responder_on_message3(r, initiator_on_message2(i, responder_on_message1(r, initiator_start(i))));
    ASSERT_EQ(session_keys(i).exporter_secret, session_keys(r).exporter_secret);
    exporters.insert(session_keys(i).exporter_secret);
  }
  EXPECT_EQ(exporters.size(), 50u);
}

// ---- authentication key per method -----------------------------------------------

// Authentication key per method, {Initiator, Responder}: 'S' signature,
// 'D' static DH, 'P' pre-shared key. Written out independently of auth.
constexpr const char* kMethodKeys[5] = {"SS", "SD", "DS", "DD", "PP"};

TEST(MethodKeys, SignVersusMacPerCell) {
  int cells = 0;
  for (int method = 0; method <= 4; ++method) {
    auto opt = options(method, 8);
    auto pi = std::make_shared<InstrumentedProvider>(make_provider(0));
    auto pr = std::make_shared<InstrumentedProvider>(make_provider(0));
    const auto cast = scenario::cast_for(*pi, opt);
    auto i = make_initiator(scenario::initiator_config(cast, opt, pi));
    auto r = make_responder(scenario::responder_config(cast, opt, pr));
    responder_on_message3(r, initiator_on_message2(i, responder_on_message1(r, initiator_start(i))));
    ASSERT_EQ(r.phase(), Phase::kCompleted);
    for (Role role : {Role::kInitiator, Role::kResponder}) {
      const auto& own = role == Role::kInitiator ? *pi : *pr;
      const auto& peer = role == Role::kInitiator ? *pr : *pi;
      const char key = kMethodKeys[method][role == Role::kInitiator ? 0 : 1];
      const bool sig = key == 'S';
      EXPECT_EQ(uses_signature(method, role), sig);
      EXPECT_EQ(own.count(CryptoOp::kSign), sig ? 1u : 0u) << method << role_name(role);
      EXPECT_EQ(peer.count(CryptoOp::kVerify), sig ? 1u : 0u) << method << role_name(role);
      // Every cell computes its MAC; signature cells sign over it.
      EXPECT_GE(own.count(CryptoOp::kMac), 1u);
      ++cells;
    }
    // Static DH cells cost one extra ECDH on each side.
    const std::size_t static_dh = (kMethodKeys[method][0] == 'D') + (kMethodKeys[method][1] == 'D');
    EXPECT_EQ(pi->count(CryptoOp::kEcdh), 1 + static_dh) << method;
    EXPECT_EQ(pr->count(CryptoOp::kEcdh), 1 + static_dh) << method;
  }
  EXPECT_EQ(cells, 10);
}

// ---- configuration and negotiation ----------------------------------------------------

TEST(Handshake, CredentialMustFitTheMethod) {
  auto opt = options(3, 9);
  auto provider = make_provider(0);
  auto cast = scenario::make_cast(*provider, 0, 9);  // signature credentials
  auto i = make_initiator(scenario::initiator_config(cast, opt, provider));
  EXPECT_EQ(code_of([&] { initiator_start(i); }), ErrorCode::kConfigInconsistent);
  EXPECT_EQ(i.phase(), Phase::kFailed);

  auto cfg = scenario::initiator_config(cast, opt, provider);
  cfg.rng_seed = Bytes(8, 1);
  EXPECT_EQ(code_of([&] { make_initiator(cfg); }), ErrorCode::kConfigInconsistent);
  cfg = scenario::initiator_config(cast, opt, provider);
  EXPECT_EQ(code_of([&] { make_responder(cfg); }), ErrorCode::kConfigInconsistent);
}

TEST(Handshake, ResponderNegotiation) {
  auto p = fresh_pair(options(0, 10));
  Message1 m1 = initiator_start(p.i);
  Message1 odd = m1;
  odd.suite = 7;
  EXPECT_EQ(code_of([&] { responder_on_message1(p.r, odd); }), ErrorCode::kSuiteRejected);
  EXPECT_EQ(p.r.failed_round(), 1);

  auto q = fresh_pair(options(0, 10));
  odd = initiator_start(q.i);
  odd.method = 1;
  EXPECT_EQ(code_of([&] { responder_on_message1(q.r, odd); }), ErrorCode::kMethodRejected);

  auto s = fresh_pair(options(0, 10));
  odd = initiator_start(s.i);
  odd.ead_1 = {{7, true, {}}};
  EXPECT_EQ(code_of([&] { responder_on_message1(s.r, odd); }), ErrorCode::kMalformedEad);
}

TEST(Handshake, EadIsSurfacedAndUnderstoodCriticalPasses) {
  auto opt = options(2, 11);
  auto provider = make_provider(0);
  const auto cast = scenario::cast_for(*provider, opt);
  auto icfg = scenario::initiator_config(cast, opt, provider);
  auto rcfg = scenario::responder_config(cast, opt, provider);
  icfg.ead_to_send[0] = {{3, false, {1}}, {4, true, {2}}};
  icfg.ead_to_send[2] = {{5, false, {}}};
  rcfg.ead_to_send[1] = {{6, false, {3, 3}}};
  rcfg.understood_ead_labels = {4};
  auto i = make_initiator(icfg);
  auto r = make_responder(rcfg);
  responder_on_message3(r, initiator_on_message2(i, responder_on_message1(r, initiator_start(i))));
  EXPECT_EQ(r.phase(), Phase::kCompleted);
  EXPECT_EQ(r.received_ead(1), icfg.ead_to_send[0]);
  EXPECT_EQ(i.received_ead(2), rcfg.ead_to_send[1]);
  EXPECT_EQ(r.received_ead(3), icfg.ead_to_send[2]);
}

// ---- state machine ---------------------------------------------------------------------

TEST(StateMachine, WrongPhaseLeavesStateUntouched) {
  auto p = fresh_pair(options(0, 12));
  const Message1 m1 = initiator_start(p.i);
  EXPECT_EQ(code_of([&] { initiator_start(p.i); }), ErrorCode::kUnexpectedMessage);
  EXPECT_EQ(p.i.phase(), Phase::kWaitMsg2);
  EXPECT_FALSE(p.i.failure());
  const Message2 m2 = responder_on_message1(p.r, m1);
  EXPECT_EQ(code_of([&] { responder_on_message1(p.r, m1); }), ErrorCode::kUnexpectedMessage);
  EXPECT_EQ(p.r.phase(), Phase::kWaitMsg3);
  const Message3 m3 = initiator_on_message2(p.i, m2);
  responder_on_message3(p.r, m3);
  // Nothing leaves Completed.
  EXPECT_EQ(code_of([&] { responder_on_message3(p.r, m3); }), ErrorCode::kUnexpectedMessage);
  EXPECT_EQ(code_of([&] { initiator_on_message4(p.i, Message4{{1}}); }), ErrorCode::kUnexpectedMessage);
  EXPECT_EQ(p.i.phase(), Phase::kCompleted);
}

TEST(StateMachine, PhasesOnlyMoveForward) {
  const auto run = scenario::run_handshake(options(1, 13, 0, true));
  ASSERT_TRUE(run.completed);
  for (const auto* s : {&*run.initiator, &*run.responder}) {
    int last = -1;
    for (const auto& t : s->transitions()) {
      EXPECT_GT(static_cast<int>(t.to), static_cast<int>(t.from));
      EXPECT_GE(static_cast<int>(t.from), last);
      last = static_cast<int>(t.to);
    }
    EXPECT_EQ(s->transitions().back().to, Phase::kCompleted);
  }
}

TEST(StateMachine, ExportNeedsCompletion) {
  auto p = fresh_pair(options(0, 14));
  initiator_start(p.i);
  EXPECT_EQ(code_of([&] { export_key(p.i, to_bytes("x"), 16); }), ErrorCode::kNotCompleted);
  EXPECT_FALSE(session_keys(p.i).handshake_complete);
  EXPECT_TRUE(session_keys(p.i).exporter_secret.empty());
}

TEST(StateMachine, SessionSecretAppearsWithBothEphemerals) {
  auto p = fresh_pair(options(0, 15));
  const auto m1 = initiator_start(p.i);
  EXPECT_TRUE(p.i.session_secret().empty());
  EXPECT_TRUE(p.r.session_secret().empty());
  const auto m2 = responder_on_message1(p.r, m1);
  EXPECT_FALSE(p.r.session_secret().empty());
  EXPECT_TRUE(p.i.session_secret().empty());
  initiator_on_message2(p.i, m2);
  EXPECT_EQ(p.i.session_secret(), p.r.session_secret());
}

// ---- key erasure ------------------------------------------------------------------------

TEST(KeyErasure, EphemeralPrivateGoneAfterUse) {
  for (int method = 0; method <= 4; ++method) {
    auto p = fresh_pair(options(method, 16));
    const auto m1 = initiator_start(p.i);
    EXPECT_TRUE(p.i.holds_ephemeral_private());
    EXPECT_NE(p.i.debug_json().find("ephemeral_private"), std::string::npos);
    const auto m2 = responder_on_message1(p.r, m1);
    EXPECT_TRUE(p.r.holds_ephemeral_private());
    const auto m3 = initiator_on_message2(p.i, m2);
    EXPECT_FALSE(p.i.holds_ephemeral_private());
    responder_on_message3(p.r, m3);
    for (const auto* s : {&p.i, &p.r}) {
      EXPECT_EQ(s->phase(), Phase::kCompleted);
      EXPECT_FALSE(s->holds_ephemeral_private());
      EXPECT_EQ(s->debug_json().find("ephemeral_private"), std::string::npos);
    }
  }
}

TEST(KeyErasure, FailureAlsoWipes) {
  auto p = fresh_pair(options(0, 17));
  const auto m2 = responder_on_message1(p.r, initiator_start(p.i));
  Message3 bad{{0x00}};
  EXPECT_EQ(code_of([&] { responder_on_message3(p.r, bad); }), ErrorCode::kAeadAuthFailure);
  EXPECT_FALSE(p.r.holds_ephemeral_private());
  (void)m2;
}

// ---- tampering and binding -----------------------------------------------------------------

TEST(Tamper, EveryBitOfCiphertext3FailsAtMessage3) {
  for (int method : {0, 3, 4}) {
    const auto base = direct_handshake(options(method, 18));
    const Bytes ct3 = decode_message3(base.m3).ciphertext_3;
    for (std::size_t bit = 0; bit < ct3.size() * 8; ++bit) {
      auto p = fresh_pair(options(method, 18));
      initiator_on_message2(p.i, responder_on_message1(p.r, initiator_start(p.i)));
      ASSERT_EQ(code_of([&] { responder_on_message3(p.r, Message3{flip(ct3, bit)}); }), ErrorCode::kAeadAuthFailure);
      ASSERT_EQ(p.r.phase(), Phase::kFailed);
      ASSERT_EQ(p.r.failed_round(), 3);
    }
  }
}

TEST(Tamper, EveryBitOfCiphertext4FailsAtMessage4) {
  const auto base = direct_handshake(options(1, 19, 0, true));
  const Bytes ct4 = decode_message4(base.m4).ciphertext_4;
  for (std::size_t bit = 0; bit < ct4.size() * 8; ++bit) {
    auto p = fresh_pair(options(1, 19, 0, true));
    responder_on_message3(p.r, initiator_on_message2(p.i, responder_on_message1(p.r, initiator_start(p.i))));
    ASSERT_EQ(code_of([&] { initiator_on_message4(p.i, Message4{flip(ct4, bit)}); }), ErrorCode::kAeadAuthFailure);
    ASSERT_EQ(p.i.failed_round(), 4);
  }
  // A cut m4 never reaches verification.
  EXPECT_EQ(code_of([&] { decode_message4(ByteView(base.m4).first(base.m4.size() - 1)); }), ErrorCode::kTruncated);
}

TEST(Tamper, Ciphertext2FlipsFailAtMessage2) {
  const auto base = direct_handshake(options(0, 20));
  const Message2 m2 = decode_message2(base.m2);
  const std::set<ErrorCode> allowed{ErrorCode::kAuthFailure, ErrorCode::kDecryptFailure, ErrorCode::kUnknownCredential};
  for (std::size_t bit = 0; bit < m2.ciphertext_2.size() * 8; ++bit) {
    auto p = fresh_pair(options(0, 20));
    responder_on_message1(p.r, initiator_start(p.i));
    Message2 bad = m2;
    bad.ciphertext_2 = flip(m2.ciphertext_2, bit);
    const auto c = code_of([&] { initiator_on_message2(p.i, bad); });
    ASSERT_TRUE(allowed.contains(c)) << error_name(c);
    ASSERT_EQ(p.i.failed_round(), 2);
  }
}

TEST(Binding, CrossSessionSpliceFails) {
  // Same long-term keys, different ephemerals: sessions A and B.
  for (int k = 0; k < 10; ++k) {
    const int method = k % 5;
    auto make = [&](int s, bool m4) {
      auto opt = options(method, 500, 0, m4);
      auto provider = make_provider(0);
      const auto cast = scenario::cast_for(*provider, opt);
      auto icfg = scenario::initiator_config(cast, opt, provider);
      auto rcfg = scenario::responder_config(cast, opt, provider);
      icfg.rng_seed = derive_seed(s, "splice/I");
      rcfg.rng_seed = derive_seed(s, "splice/R");
      return Pair{make_initiator(icfg), make_responder(rcfg)};
    };
    auto a = make(2 * k, true);
    auto b = make(2 * k + 1, true);
    const auto a1 = initiator_start(a.i);
    const auto b1 = initiator_start(b.i);
    const auto a2 = responder_on_message1(a.r, a1);
    const auto b2 = responder_on_message1(b.r, b1);

    // B's message 2 into A's Initiator.
    auto a_probe = make(2 * k, true);
    initiator_start(a_probe.i);
    EXPECT_ANY_THROW(initiator_on_message2(a_probe.i, b2));
    EXPECT_EQ(a_probe.i.phase(), Phase::kFailed);

    const auto a3 = initiator_on_message2(a.i, a2);
    const auto b3 = initiator_on_message2(b.i, b2);
    // B's message 3 into A's Responder.
    auto a_r = make(2 * k, true);
    responder_on_message1(a_r.r, a1);
    EXPECT_EQ(code_of([&] { responder_on_message3(a_r.r, b3); }), ErrorCode::kAeadAuthFailure);

    const auto a4 = responder_on_message3(a.r, a3);
    const auto b4 = responder_on_message3(b.r, b3);
    // B's message 4 into A's Initiator.
    EXPECT_EQ(code_of([&] { initiator_on_message4(a.i, *b4); }), ErrorCode::kAeadAuthFailure);
    EXPECT_EQ(a.i.failed_round(), 4);
    initiator_on_message4(b.i, *b4);
    EXPECT_EQ(b.i.phase(), Phase::kCompleted);
    (void)a4;
  }
}

TEST(Harness, Message4MismatchIsATimeout) {
  auto opt = options(0, 22);
  auto provider = make_provider(0);
  const auto cast = scenario::cast_for(*provider, opt);
  auto icfg = scenario::initiator_config(cast, opt, provider);
  icfg.use_message4 = true;
  auto i = make_initiator(icfg);
  auto r = make_responder(scenario::responder_config(cast, opt, provider));
  EXPECT_FALSE(responder_on_message3(r, initiator_on_message2(i, responder_on_message1(r, initiator_start(i)))));
  EXPECT_EQ(r.phase(), Phase::kCompleted);
  EXPECT_EQ(i.phase(), Phase::kWaitMsg4);  // waits forever; no protocol error
  EXPECT_FALSE(i.failure());
}

// ---- schedule pieces -------------------------------------------------------------------------

TEST(Schedule, KdfInfoLayout) {
  EXPECT_EQ(to_hex(kdf_info(KdfLabel::kK3, from_hex("aabb"), 16)), "0342aabb10");
  EXPECT_EQ(to_hex(kdf_info(KdfLabel::kExporter, {}, 32)), "0c401820");
}

TEST(Schedule, TranscriptStepAvalanche) {
  const auto p = make_provider(0);
  const Bytes prev(32, 1);
  const Bytes material = to_bytes("new material for the chain");
  EXPECT_EQ(transcript_step(*p, prev, material), transcript_step(*p, prev, material));
  EXPECT_EQ(transcript_step(*p, prev, {}), sha256(prev));
  std::set<Bytes> digests{transcript_step(*p, prev, material)};
  for (std::size_t i = 0; i < material.size(); ++i) {
    Bytes m = material;
    m[i] ^= 0x01;
    digests.insert(transcript_step(*p, prev, m));
  }
  EXPECT_EQ(digests.size(), material.size() + 1);
}

// ---- records ----------------------------------------------------------------------------------

TEST(Records, SealOpenPerDirection) {
  const auto run = direct_handshake(options(0, 23));
  const auto p = make_provider(0);
  const auto ki = traffic_keys(*run.initiator, Direction::kInitiatorToResponder);
  const auto kr = traffic_keys(*run.responder, Direction::kInitiatorToResponder);
  EXPECT_EQ(ki.key, kr.key);
  EXPECT_NE(ki.key, traffic_keys(*run.initiator, Direction::kResponderToInitiator).key);
  const Bytes rec = seal_record(*p, ki, 7, to_bytes("hello"));
  EXPECT_EQ(to_hex(ByteView(rec).first(8)), "0000000000000007");
  const auto opened = open_record(*p, kr, rec);
  EXPECT_EQ(opened.seq, 7u);
  EXPECT_EQ(opened.plaintext, to_bytes("hello"));
  Bytes renumbered = rec;
  renumbered[7] = 8;
  EXPECT_EQ(code_of([&] { open_record(*p, kr, renumbered); }), ErrorCode::kAeadAuthFailure);
  EXPECT_EQ(code_of([&] { open_record(*p, kr, Bytes(5, 0)); }), ErrorCode::kAeadAuthFailure);
}

// ---- concurrency ------------------------------------------------------------------------------

TEST(Concurrency, IndependentSessionsOnThreads) {
  std::vector<Bytes> exporters(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([t, &exporters] {
      const auto run = direct_handshake(options(t % 5, 600 + t));
      exporters[static_cast<std::size_t>(t)] = session_keys(*run.initiator).exporter_secret;
    });
  }
  for (auto& t : threads) t.join();
  for (int t = 0; t < 8; ++t) {
    EXPECT_EQ(exporters[static_cast<std::size_t>(t)],
              session_keys(*direct_handshake(options(t % 5, 600 + t)).initiator).exporter_secret);
  }
}

}  // namespace
}  // namespace edhoc

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

#include "edhoc/protocol.hpp"

#include <sodium.h>

#include <algorithm>
#include <json.hpp>

#include "edhoc/cbor.hpp"

namespace edhoc {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::kStart: return "Start";
    case Phase::kWaitMsg2: return "WaitMsg2";
    case Phase::kWaitMsg3: return "WaitMsg3";
    case Phase::kWaitMsg4: return "WaitMsg4";
    case Phase::kCompleted: return "Completed";
    case Phase::kFailed: return "Failed";
  }
  return "?";
}

Bytes kdf_info(KdfLabel label, ByteView context, std::size_t length) {
  cbor::Writer w;
  w.uint(static_cast<std::uint8_t>(label)).bytes(context).uint(length);
  return std::move(w).take();
}

Bytes transcript_step(const CryptoProvider& provider, ByteView previous, ByteView material) {
  return provider.hash(concat({previous, material}));
}

SessionState::SessionState(SessionConfig config) : config_(std::move(config)), method_(config_.method) {}

SessionState::~SessionState() {
  for (Bytes* secret : {&ephemeral_private_, &prk_2e_, &prk_3e2m_, &prk_4e3m_, &prk_out_, &prk_exporter_}) {
    secure_wipe(*secret);
  }
}

std::string SessionState::debug_json() const {
  nlohmann::ordered_json j;
  j["session_id"] = config_.session_id;
  j["role"] = role_name(config_.role);
  j["method"] = method_;
  j["phase"] = phase_name(phase_);
  if (failure_) j["failure"] = error_name(*failure_);
  if (!ephemeral_private_.empty()) j["ephemeral_private"] = to_hex(ephemeral_private_);
  j["ephemeral_public"] = to_hex(own_ephemeral_public_);
  j["peer_ephemeral_public"] = to_hex(peer_ephemeral_public_);
  j["th_2"] = to_hex(th_.th_2);
  j["th_3"] = to_hex(th_.th_3);
  j["th_4"] = to_hex(th_.th_4);
  j["peer_authenticated"] = peer_authenticated_;
  j["peer_unverified"] = peer_unverified_;
  if (peer_credential_) j["peer_id_cred"] = to_hex(peer_credential_->id_cred);
  return j.dump();
}

namespace detail {

class Engine {
 public:
  static SessionState create(SessionConfig config, Role role) {
    if (config.role != role) raise(ErrorCode::kConfigInconsistent, "role does not match constructor");
    if (!config.provider) raise(ErrorCode::kConfigInconsistent, "no crypto provider");
    if (config.method < 0 || config.method > kMaxMethod) raise(ErrorCode::kConfigInconsistent, "method outside 0..4");
    if (!config.connection_id.valid()) raise(ErrorCode::kConfigInconsistent, "connection identifier");
    if (config.rng_seed.size() < 16) raise(ErrorCode::kConfigInconsistent, "rng seed shorter than 16 bytes");
    if (config.session_id.empty()) config.session_id = to_hex(config.connection_id.value);
    return SessionState(std::move(config));
  }

  static Message1 initiator_start(SessionState& s) {
    expect_phase(s, Role::kInitiator, Phase::kStart);
    return guarded(s, 1, [&] {
      check_own_credential(s, s.method_);
      const auto& p = provider(s);
      make_ephemeral(s);
      Message1 m1{s.method_, p.suite().id, s.own_ephemeral_public_, s.config_.connection_id, s.config_.ead_to_send[0]};
      s.h_message1_ = p.hash(encode(m1));
      advance(s, Phase::kWaitMsg2, 1);
      return m1;
    });
  }

  static Message2 responder_on_message1(SessionState& s, const Message1& m1) {
    expect_phase(s, Role::kResponder, Phase::kStart);
    return guarded(s, 1, [&] {
      const auto& p = provider(s);
      const auto& cfg = s.config_;
      const auto& suites = cfg.accepted_suites;
      const bool suite_ok = m1.suite == p.suite().id &&
                            (suites.empty() || std::find(suites.begin(), suites.end(), m1.suite) != suites.end());
      if (!suite_ok) raise(ErrorCode::kSuiteRejected, "suite " + std::to_string(m1.suite));
      const auto& methods = cfg.accepted_methods;
      const bool method_ok = methods.empty() ? m1.method == cfg.method
                                             : std::find(methods.begin(), methods.end(), m1.method) != methods.end();
      if (!method_ok) raise(ErrorCode::kMethodRejected, "method " + std::to_string(m1.method));
      s.method_ = m1.method;
      check_own_credential(s, s.method_);
      check_ead(s, m1.ead_1, 1);
      s.received_ead_[0] = m1.ead_1;

      make_ephemeral(s);
      s.peer_ephemeral_public_ = m1.g_x;
      s.peer_connection_id_ = m1.c_i;
      s.h_message1_ = p.hash(encode(m1));
      derive_prk_2e(s, p.ecdh(s.ephemeral_private_, m1.g_x));

      const Credential& own = cfg.own;
      if (own.kind == CredentialKind::kStaticDh) {
        mix_3e2m(s, p.ecdh(*own.secret, s.peer_ephemeral_public_));
      } else {
        s.prk_3e2m_ = s.prk_2e_;
      }

      const IdCred id_cred = own.to_id_cred(cfg.credential_by_value);
      AuthInput in{encode(id_cred), s.th_.th_2, own.cred(), encode_ead(cfg.ead_to_send[1]), {}};
      in.mac = compute_mac(s, KdfLabel::kMac2, s.prk_3e2m_, own, in);
      AuthPlaintext pt{id_cred, build_sig_or_mac(p, s.method_, Role::kResponder, own, in), cfg.ead_to_send[1]};
      Bytes plaintext_2 = encode(pt);
      Bytes ciphertext_2 = xor_keystream(s, plaintext_2);
      s.th_.th_3 = transcript_step(p, s.th_.th_2, concat({plaintext_2, cbor_bytes(in.cred)}));

      advance(s, Phase::kWaitMsg3, 1);
      return Message2{s.own_ephemeral_public_, cfg.connection_id, std::move(ciphertext_2)};
    });
  }

  static Message3 initiator_on_message2(SessionState& s, const Message2& m2) {
    expect_phase(s, Role::kInitiator, Phase::kWaitMsg2);
    return guarded(s, 2, [&] {
      const auto& p = provider(s);
      const auto& cfg = s.config_;
      s.peer_ephemeral_public_ = m2.g_y;
      s.peer_connection_id_ = m2.c_r;
      derive_prk_2e(s, p.ecdh(s.ephemeral_private_, m2.g_y));

      const Bytes plaintext_2 = xor_keystream(s, m2.ciphertext_2);
      AuthPlaintext pt;
      try {
        pt = decode_auth_plaintext(plaintext_2);
      } catch (const EdhocError& e) {
        raise(ErrorCode::kDecryptFailure, std::string("ciphertext_2 does not decode: ") + e.what());
      }
      check_ead(s, pt.ead, 2);
      s.received_ead_[1] = pt.ead;

      const auto peer = resolve_peer(s, pt.id_cred, Role::kResponder);
      if (peer.credential.kind == CredentialKind::kStaticDh) {
        mix_3e2m(s, p.ecdh(s.ephemeral_private_, peer.credential.public_key));
      } else {
        s.prk_3e2m_ = s.prk_2e_;
      }
      AuthInput in{encode(pt.id_cred), s.th_.th_2, peer.credential.cred(), encode_ead(pt.ead), {}};
      check_peer(s, peer, Role::kResponder, KdfLabel::kMac2, s.prk_3e2m_, pt.sig_or_mac, in);
      secure_wipe(s.ephemeral_private_);
      s.th_.th_3 = transcript_step(p, s.th_.th_2, concat({plaintext_2, cbor_bytes(in.cred)}));

      const Credential& own = cfg.own;
      if (own.kind == CredentialKind::kStaticDh) {
        mix_4e3m(s, p.ecdh(*own.secret, s.peer_ephemeral_public_));
      } else {
        s.prk_4e3m_ = s.prk_3e2m_;
      }
      const IdCred id_cred = own.to_id_cred(cfg.credential_by_value);
      AuthInput own_in{encode(id_cred), s.th_.th_3, own.cred(), encode_ead(cfg.ead_to_send[2]), {}};
      own_in.mac = compute_mac(s, KdfLabel::kMac3, s.prk_4e3m_, own, own_in);
      AuthPlaintext out{id_cred, build_sig_or_mac(p, s.method_, Role::kInitiator, own, own_in), cfg.ead_to_send[2]};
      const Bytes plaintext_3 = encode(out);
      const auto suite = p.suite();
      const Bytes key = expand(s, s.prk_3e2m_, KdfLabel::kK3, s.th_.th_3, suite.aead_key_length);
      const Bytes iv = expand(s, s.prk_3e2m_, KdfLabel::kIv3, s.th_.th_3, suite.aead_nonce_length);
      Bytes ciphertext_3 = p.aead_seal(key, iv, cbor_bytes(s.th_.th_3), plaintext_3);

      finish_schedule(s, plaintext_3, own_in.cred);
      advance(s, cfg.use_message4 ? Phase::kWaitMsg4 : Phase::kCompleted, 2);
      return Message3{std::move(ciphertext_3)};
    });
  }

  static std::optional<Message4> responder_on_message3(SessionState& s, const Message3& m3) {
    expect_phase(s, Role::kResponder, Phase::kWaitMsg3);
    return guarded(s, 3, [&]() -> std::optional<Message4> {
      const auto& p = provider(s);
      const auto& cfg = s.config_;
      const auto suite = p.suite();
      const Bytes key = expand(s, s.prk_3e2m_, KdfLabel::kK3, s.th_.th_3, suite.aead_key_length);
      const Bytes iv = expand(s, s.prk_3e2m_, KdfLabel::kIv3, s.th_.th_3, suite.aead_nonce_length);
      const Bytes plaintext_3 = p.aead_open(key, iv, cbor_bytes(s.th_.th_3), m3.ciphertext_3);
      const AuthPlaintext pt = decode_auth_plaintext(plaintext_3);
      check_ead(s, pt.ead, 3);
      s.received_ead_[2] = pt.ead;

      const auto peer = resolve_peer(s, pt.id_cred, Role::kInitiator);
      if (peer.credential.kind == CredentialKind::kStaticDh) {
        mix_4e3m(s, p.ecdh(s.ephemeral_private_, peer.credential.public_key));
      } else {
        s.prk_4e3m_ = s.prk_3e2m_;
      }
      secure_wipe(s.ephemeral_private_);
      AuthInput in{encode(pt.id_cred), s.th_.th_3, peer.credential.cred(), encode_ead(pt.ead), {}};
      check_peer(s, peer, Role::kInitiator, KdfLabel::kMac3, s.prk_4e3m_, pt.sig_or_mac, in);

      finish_schedule(s, plaintext_3, in.cred);
      std::optional<Message4> m4;
      if (cfg.use_message4) {
        const Bytes k4 = expand(s, s.prk_4e3m_, KdfLabel::kK4, s.th_.th_4, suite.aead_key_length);
        const Bytes iv4 = expand(s, s.prk_4e3m_, KdfLabel::kIv4, s.th_.th_4, suite.aead_nonce_length);
        Plaintext4 pt4{mac_4(s), cfg.ead_to_send[3]};
        m4 = Message4{p.aead_seal(k4, iv4, cbor_bytes(s.th_.th_4), encode(pt4))};
      }
      advance(s, Phase::kCompleted, 3);
      return m4;
    });
  }

  static void initiator_on_message4(SessionState& s, const Message4& m4) {
    expect_phase(s, Role::kInitiator, Phase::kWaitMsg4);
    guarded(s, 4, [&] {
      const auto& p = provider(s);
      const auto suite = p.suite();
      const Bytes k4 = expand(s, s.prk_4e3m_, KdfLabel::kK4, s.th_.th_4, suite.aead_key_length);
      const Bytes iv4 = expand(s, s.prk_4e3m_, KdfLabel::kIv4, s.th_.th_4, suite.aead_nonce_length);
      const Plaintext4 pt = decode_plaintext4(p.aead_open(k4, iv4, cbor_bytes(s.th_.th_4), m4.ciphertext_4));
      check_ead(s, pt.ead_4, 4);
      s.received_ead_[3] = pt.ead_4;
      const Bytes expected = mac_4(s);
      if (pt.mac_4.size() != expected.size() ||
          sodium_memcmp(pt.mac_4.data(), expected.data(), expected.size()) != 0) {
        raise(ErrorCode::kAuthFailure, "MAC_4 mismatch");
      }
      advance(s, Phase::kCompleted, 4);
      return 0;
    });
  }

  static Bytes export_key(const SessionState& s, ByteView label, std::size_t length) {
    if (s.phase_ != Phase::kCompleted) raise(ErrorCode::kNotCompleted);
    return provider(s).kdf_expand(s.prk_exporter_, kdf_info(KdfLabel::kExporter, label, length), length);
  }

  static SessionKeys keys(const SessionState& s) {
    SessionKeys k;
    k.handshake_complete = s.phase_ == Phase::kCompleted;
    if (k.handshake_complete) k.exporter_secret = s.prk_exporter_;
    return k;
  }

 private:
  static const CryptoProvider& provider(const SessionState& s) { return *s.config_.provider; }

  static Bytes cbor_bytes(ByteView b) {
    cbor::Writer w;
    w.bytes(b);
    return std::move(w).take();
  }

  static void expect_phase(const SessionState& s, Role role, Phase phase) {
    if (s.config_.role != role || s.phase_ != phase) {
      raise(ErrorCode::kUnexpectedMessage, std::string(role_name(s.config_.role)) + " in phase " +
                                               std::string(phase_name(s.phase_)));
    }
  }

  static void advance(SessionState& s, Phase to, int round) {
    s.transitions_.push_back({s.config_.session_id, s.config_.role, s.phase_, to, round, std::nullopt});
    s.phase_ = to;
  }

  template <typename F>
  static auto guarded(SessionState& s, int round, F&& body) -> decltype(body()) {
    try {
      return body();
    } catch (const EdhocError& e) {
      s.transitions_.push_back({s.config_.session_id, s.config_.role, s.phase_, Phase::kFailed, round, e.code()});
      s.phase_ = Phase::kFailed;
      s.failure_ = e.code();
      s.failed_round_ = round;
      secure_wipe(s.ephemeral_private_);
      throw;
    }
  }

  static void check_own_credential(const SessionState& s, int method) {
    const Credential& own = s.config_.own;
    if (own.kind != required_kind(method, s.config_.role) || !own.secret) {
      raise(ErrorCode::kConfigInconsistent, std::string(credential_kind_name(own.kind)) +
                                                " credential cannot authenticate " +
                                                std::string(role_name(s.config_.role)) + " in method " +
                                                std::to_string(method));
    }
  }

  static void check_ead(const SessionState& s, const EadList& ead, int round) {
    for (const auto& item : ead) {
      if (item.critical && !s.config_.understood_ead_labels.contains(item.label)) {
        raise(ErrorCode::kMalformedEad,
              "critical EAD label " + std::to_string(item.label) + " in message " + std::to_string(round));
      }
    }
  }

  static void make_ephemeral(SessionState& s) {
    Bytes seed = concat({s.config_.rng_seed, to_bytes("/ephemeral")});
    auto kp = provider(s).generate_keypair(KeyKind::kEphemeralDh, seed);
    s.ephemeral_private_ = std::move(kp.private_key);
    s.own_ephemeral_public_ = std::move(kp.public_key);
  }

  static Bytes expand(const SessionState& s, ByteView prk, KdfLabel label, ByteView context, std::size_t length) {
    return provider(s).kdf_expand(prk, kdf_info(label, context, length), length);
  }

  static void derive_prk_2e(SessionState& s, Bytes g_xy) {
    const auto& p = provider(s);
    const Bytes& g_y = s.config_.role == Role::kInitiator ? s.peer_ephemeral_public_ : s.own_ephemeral_public_;
    const ConnectionId& c_r = s.config_.role == Role::kInitiator ? s.peer_connection_id_ : s.config_.connection_id;
    s.th_.th_2 = transcript_step(p, s.h_message1_, concat({cbor_bytes(g_y), cbor_bytes(c_r.value)}));
    s.prk_2e_ = p.kdf_extract(s.th_.th_2, g_xy);
    secure_wipe(g_xy);
  }

  static void mix_3e2m(SessionState& s, Bytes g_rx) {
    const Bytes salt = expand(s, s.prk_2e_, KdfLabel::kSalt3e2m, s.th_.th_2, provider(s).suite().hash_length);
    s.prk_3e2m_ = provider(s).kdf_extract(salt, g_rx);
    secure_wipe(g_rx);
  }

  static void mix_4e3m(SessionState& s, Bytes g_iy) {
    const Bytes salt = expand(s, s.prk_3e2m_, KdfLabel::kSalt4e3m, s.th_.th_3, provider(s).suite().hash_length);
    s.prk_4e3m_ = provider(s).kdf_extract(salt, g_iy);
    secure_wipe(g_iy);
  }

  /// MAC_2 / MAC_3 under `prk`. A PSK credential is folded in as an extract
  /// salt first, so the MAC proves knowledge of the PSK.
  static Bytes compute_mac(const SessionState& s, KdfLabel label, ByteView prk, const Credential& cred,
                           const AuthInput& in) {
    const auto& p = provider(s);
    const std::size_t len = p.suite().hash_length;
    const Bytes info = kdf_info(label, mac_context(in), len);
    if (cred.kind == CredentialKind::kPsk) {
      if (!cred.secret) raise(ErrorCode::kUnknownCredential, "PSK value unavailable");
      Bytes keyed = p.kdf_extract(*cred.secret, prk);
      Bytes out = p.mac(keyed, info, len);
      secure_wipe(keyed);
      return out;
    }
    return p.mac(prk, info, len);
  }

  static Bytes mac_4(const SessionState& s) {
    const auto& p = provider(s);
    const std::size_t len = p.suite().hash_length;
    return p.mac(s.prk_4e3m_, kdf_info(KdfLabel::kMac4, s.th_.th_4, len), len);
  }

  static ResolvedCredential resolve_peer(SessionState& s, const IdCred& id_cred, Role peer_role) {
    const auto& cfg = s.config_;
    const auto& suite = provider(s).suite();
    ResolvedCredential peer;
    try {
      peer = resolve(cfg.store, id_cred, cfg.policy, suite);
    } catch (const EdhocError& e) {
      // A non-verifying endpoint only needs key material the schedule
      // itself consumes; anything else may stay unknown.
      const bool tolerable = !cfg.verify_peer && e.code() == ErrorCode::kUnknownCredential &&
                             required_kind(s.method_, peer_role) != CredentialKind::kStaticDh;
      if (!tolerable) throw;
      peer.credential.id_cred = id_cred.kid;
      peer.credential.kind = required_kind(s.method_, peer_role);
      peer.verified = false;
    }
    if (peer.credential.kind != required_kind(s.method_, peer_role)) {
      raise(ErrorCode::kAuthFailure, "peer credential kind does not fit method " + std::to_string(s.method_));
    }
    s.peer_credential_ = peer.credential;
    s.peer_unverified_ = !peer.verified;
    return peer;
  }

  static void check_peer(SessionState& s, const ResolvedCredential& peer, Role peer_role, KdfLabel label,
                         ByteView prk, ByteView payload, AuthInput& in) {
    if (!s.config_.verify_peer) return;
    in.mac = compute_mac(s, label, prk, peer.credential, in);
    verify_sig_or_mac(provider(s), s.method_, peer_role, peer, payload, in);
    s.peer_authenticated_ = true;
  }

  static Bytes xor_keystream(const SessionState& s, ByteView data) {
    Bytes ks = expand(s, s.prk_2e_, KdfLabel::kKeystream2, s.th_.th_2, data.size());
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] ^= data[i];
    return ks;
  }

  static void finish_schedule(SessionState& s, ByteView plaintext_3, ByteView cred_i) {
    const auto& p = provider(s);
    const std::size_t len = p.suite().hash_length;
    s.th_.th_4 = transcript_step(p, s.th_.th_3, concat({plaintext_3, cbor_bytes(cred_i)}));
    s.prk_out_ = expand(s, s.prk_4e3m_, KdfLabel::kPrkOut, s.th_.th_4, len);
    s.prk_exporter_ = expand(s, s.prk_out_, KdfLabel::kPrkExporter, {}, len);
  }
};

}  // namespace detail

SessionState make_initiator(SessionConfig config) {
  return detail::Engine::create(std::move(config), Role::kInitiator);
}

SessionState make_responder(SessionConfig config) {
  return detail::Engine::create(std::move(config), Role::kResponder);
}

Message1 initiator_start(SessionState& state) { return detail::Engine::initiator_start(state); }

Message2 responder_on_message1(SessionState& state, const Message1& m1) {
  return detail::Engine::responder_on_message1(state, m1);
}

Message3 initiator_on_message2(SessionState& state, const Message2& m2) {
  return detail::Engine::initiator_on_message2(state, m2);
}

std::optional<Message4> responder_on_message3(SessionState& state, const Message3& m3) {
  return detail::Engine::responder_on_message3(state, m3);
}

void initiator_on_message4(SessionState& state, const Message4& m4) {
  detail::Engine::initiator_on_message4(state, m4);
}

Bytes export_key(const SessionState& state, ByteView label, std::size_t length) {
  return detail::Engine::export_key(state, label, length);
}

SessionKeys session_keys(const SessionState& state) { return detail::Engine::keys(state); }

}  // namespace edhoc

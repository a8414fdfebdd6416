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

#include "edhoc/scenario.hpp"

#include <map>

#include "edhoc/error.hpp"
#include "endpoint_actor.hpp"

namespace edhoc::scenario {

namespace {

Credential make_party_credential(const CryptoProvider& provider, CredentialKind kind, std::string_view kid,
                                 std::uint64_t seed) {
  const Bytes kid_bytes = to_bytes(kid);
  const Bytes material = derive_seed(seed, std::string("cast/") + std::string(kid));
  switch (kind) {
    case CredentialKind::kSignature: return make_signature_credential(provider, kid_bytes, material);
    case CredentialKind::kStaticDh: return make_static_dh_credential(provider, kid_bytes, material);
    case CredentialKind::kPsk: return make_psk_credential(kid_bytes, material);
  }
  raise(ErrorCode::kInvalidArgument, "credential kind");
}

const netsim::EndpointId kInitiatorId{"I"};
const netsim::EndpointId kResponderId{"R"};
const netsim::EndpointId kProxyId{"P"};

}  // namespace

Cast make_cast(const CryptoProvider& provider, int method, std::uint64_t seed) {
  const auto ki = required_kind(method, Role::kInitiator);
  const auto kr = required_kind(method, Role::kResponder);
  return Cast{method,
              make_party_credential(provider, ki, "I", seed),
              make_party_credential(provider, kr, "R", seed),
              make_party_credential(provider, kr, "M-r", seed),
              make_party_credential(provider, ki, "M-i", seed)};
}

Cast cast_for(const CryptoProvider& provider, const HandshakeOptions& opt) {
  Cast cast = make_cast(provider, opt.method, opt.seed);
  for (const auto& c : opt.credential_overrides) {
    for (Credential* member :
         {&cast.initiator, &cast.responder, &cast.adversary_as_responder, &cast.adversary_as_initiator}) {
      if (member->id_cred == c.id_cred) *member = c;
    }
  }
  return cast;
}

SessionConfig initiator_config(const Cast& cast, const HandshakeOptions& opt, const ProviderPtr& provider) {
  SessionConfig c;
  c.role = Role::kInitiator;
  c.method = opt.method;
  c.provider = provider;
  c.own = cast.initiator;
  c.store.add(cast.responder.public_part());
  c.policy = opt.initiator_policy;
  c.connection_id = ConnectionId{{0x37}};
  c.use_message4 = opt.use_message4;
  c.rng_seed = derive_seed(opt.seed, "initiator");
  c.session_id = "I";
  return c;
}

SessionConfig responder_config(const Cast& cast, const HandshakeOptions& opt, const ProviderPtr& provider) {
  SessionConfig c;
  c.role = Role::kResponder;
  c.method = opt.method;
  c.provider = provider;
  c.own = cast.responder;
  Credential peer = cast.initiator.public_part();
  if (opt.psk_mismatch && peer.kind == CredentialKind::kPsk) peer.secret = derive_seed(opt.seed, "psk-mismatch");
  c.store.add(std::move(peer));
  c.policy = opt.responder_policy;
  c.connection_id = ConnectionId{{0x27}};
  c.use_message4 = opt.use_message4;
  c.rng_seed = derive_seed(opt.seed, "responder");
  c.session_id = "R";
  return c;
}

HandshakeResult run_handshake(netsim::Network& net, const HandshakeOptions& opt,
                              const std::function<void(const netsim::Delivery&)>& on_delivery) {
  auto provider = make_provider(opt.suite);
  const Cast cast = cast_for(*provider, opt);
  net.attach(kInitiatorId);
  net.attach(kResponderId);

  detail::Victim initiator{make_initiator(initiator_config(cast, opt, provider)), kInitiatorId, kResponderId,
                           std::nullopt};
  detail::Victim responder{make_responder(responder_config(cast, opt, provider)), kResponderId, kInitiatorId,
                           std::nullopt};

  HandshakeResult result;
  try {
    net.send(initiator.self, initiator.peer, encode(initiator_start(initiator.state)));
  } catch (const EdhocError&) {
    // recorded in the initiator's state
  }
  for (std::size_t i = 0; i < mitm::kMaxSteps && !net.idle(); ++i) {
    for (const auto& d : net.step()) {
      if (on_delivery) on_delivery(d);
    }
    while (auto f = net.receive(kInitiatorId)) initiator.on_frame(net, *f);
    while (auto f = net.receive(kResponderId)) responder.on_frame(net, *f);
  }

  result.decode_error = initiator.decode_error ? initiator.decode_error : responder.decode_error;
  result.completed =
      initiator.state.phase() == Phase::kCompleted && responder.state.phase() == Phase::kCompleted;
  if (result.completed) {
    result.exporters_match =
        session_keys(initiator.state).exporter_secret == session_keys(responder.state).exporter_secret;
  }
  result.transcript = initiator.state.transitions();
  const auto& r_log = responder.state.transitions();
  result.transcript.insert(result.transcript.end(), r_log.begin(), r_log.end());
  result.delivery_log = net.log_jsonl();
  result.initiator.emplace(std::move(initiator.state));
  result.responder.emplace(std::move(responder.state));
  return result;
}

HandshakeResult run_handshake(const HandshakeOptions& opt) {
  netsim::Network net;
  return run_handshake(net, opt);
}

// ---- MitM ------------------------------------------------------------------

mitm::Outcome expected_outcome(const MitmCell& cell) {
  const bool compromised = cell.impersonation == mitm::Impersonation::kUseCompromisedKeys;
  return compromised || cell.policy == TrustMode::kWeakAccept ? mitm::Outcome::kSuccess
                                                               : mitm::Outcome::kFailedAuthAtMsg2;
}

const std::vector<Bytes>& sample_records_i2r() {
  static const std::vector<Bytes> records{to_bytes("cmd:open valve 07"), to_bytes("cmd:read sensor 3")};
  return records;
}

const std::vector<Bytes>& sample_records_r2i() {
  static const std::vector<Bytes> records{to_bytes("ack:valve 07 open")};
  return records;
}

mitm::Substitution sample_substitution() { return {4, to_bytes("shut")}; }

mitm::AttackScenario make_attack_scenario(const MitmCell& cell, std::uint64_t seed, bool use_message4) {
  auto provider = make_provider(kSuite0.id);
  HandshakeOptions opt;
  opt.method = cell.method;
  opt.seed = seed;
  opt.initiator_policy = TrustPolicy{cell.policy};
  opt.responder_policy = TrustPolicy{cell.policy};
  opt.use_message4 = use_message4;
  const Cast cast = make_cast(*provider, cell.method, seed);

  mitm::AttackScenario sc;
  sc.initiator = initiator_config(cast, opt, provider);
  sc.responder = responder_config(cast, opt, provider);
  sc.seed = seed;
  auto& a = sc.attack;
  a.method = cell.method;
  a.initiator_policy = opt.initiator_policy;
  a.responder_policy = opt.responder_policy;
  a.impersonation = cell.impersonation;
  a.victim_initiator_kid = cast.initiator.id_cred;
  a.victim_responder_kid = cast.responder.id_cred;
  for (const Credential* victim : {&cast.initiator, &cast.responder}) {
    if (cell.impersonation == mitm::Impersonation::kUseCompromisedKeys) {
      a.adversary_store.add(*victim);
    } else if (victim->kind != CredentialKind::kPsk) {
      // Public keys are public; a PSK is not.
      a.adversary_store.add(victim->public_part());
    }
  }
  a.own_as_responder = cast.adversary_as_responder;
  a.own_as_initiator = cast.adversary_as_initiator;
  a.modify_records = sample_substitution();
  a.copy_connection_ids = cell.copy_connection_ids;
  sc.records_i2r = sample_records_i2r();
  sc.records_r2i = sample_records_r2i();
  return sc;
}

MitmResult run_mitm_cell(const MitmCell& cell, std::uint64_t seed, bool use_message4) {
  netsim::Network net;
  mitm::Endpoints ids;
  mitm::prepare_network(net, ids);
  MitmResult r{cell, mitm::run_attack(net, make_attack_scenario(cell, seed, use_message4)), expected_outcome(cell),
               false};
  r.matches = r.report.outcome == r.expected;
  return r;
}

std::vector<MitmCell> full_matrix() {
  std::vector<MitmCell> cells;
  for (int method = 0; method <= kMaxMethod; ++method) {
    for (auto imp : {mitm::Impersonation::kUseOwnKeys, mitm::Impersonation::kUseCompromisedKeys}) {
      for (auto policy : {TrustMode::kStrict, TrustMode::kWeakAccept}) cells.push_back({method, imp, policy});
    }
  }
  return cells;
}

// ---- lawful interception -----------------------------------------------------

std::string_view party_name(Party p) {
  switch (p) {
    case Party::kInitiator: return "initiator";
    case Party::kResponder: return "responder";
    case Party::kAuthority: return "authority";
  }
  return "?";
}

KeyPair escrow_keypair(const CryptoProvider& provider, Party party, std::uint64_t seed) {
  return provider.generate_keypair(KeyKind::kStaticDh, derive_seed(seed, "escrow-key/" + std::string(party_name(party))));
}

LiResult run_li(const LiOptions& opt) {
  auto provider = make_provider(opt.handshake.suite);
  netsim::Network net;
  net.attach(kInitiatorId);
  net.attach(kResponderId);
  net.attach(kProxyId);
  if (opt.mirror) {
    net.add_rule({netsim::RuleKind::kMirror, {kInitiatorId, kResponderId}, kProxyId});
    net.add_rule({netsim::RuleKind::kMirror, {kResponderId, kInitiatorId}, kProxyId});
  }

  LiResult out;
  out.record.session_id = "session-" + std::to_string(opt.handshake.seed);
  out.handshake = run_handshake(net, opt.handshake, [&](const netsim::Delivery& d) {
    if (d.at == kProxyId) out.record = escrow::proxy_ingest(std::move(out.record), d);
    if (d.at == kInitiatorId) out.delivered_to_initiator.push_back(d.frame.payload);
    if (d.at == kResponderId) out.delivered_to_responder.push_back(d.frame.payload);
    if (d.reason != netsim::DeliveryReason::kMirrored) out.handshake_frames.push_back(d.frame.payload);
  });
  while (net.receive(kProxyId)) {
  }
  if (!out.handshake.completed) return out;

  // The Responder finishes the handshake with the escrow obligation.
  out.responder_session_secret = out.handshake.responder->session_secret();
  std::map<Party, KeyPair> keys;
  for (auto p : {Party::kInitiator, Party::kResponder, Party::kAuthority}) {
    keys.emplace(p, escrow_keypair(*provider, p, opt.handshake.seed));
  }
  const std::array<escrow::Recipient, 3> recipients{
      escrow::Recipient{std::string(party_name(Party::kInitiator)), keys.at(Party::kInitiator).public_key},
      escrow::Recipient{std::string(party_name(Party::kResponder)), keys.at(Party::kResponder).public_key},
      escrow::Recipient{std::string(party_name(Party::kAuthority)), keys.at(Party::kAuthority).public_key}};
  out.package = escrow::escrow_wrap(*provider, out.record.session_id, out.responder_session_secret, recipients,
                                    derive_seed(opt.handshake.seed, "escrow-package"));

  std::map<Party, escrow::EscrowShare> all_shares;
  for (const auto& [party, kp] : keys) all_shares.emplace(party, escrow::contribute(*provider, kp.private_key, *out.package));

  for (auto p : opt.cooperating) out.shares.push_back(all_shares.at(p));
  if (!opt.cooperating.empty()) {
    out.recovery_attempted = true;
    try {
      out.record.recovered_secret = escrow::recover(*provider, *out.package, out.shares);
    } catch (const EdhocError& e) {
      out.recovery_error = e.code();
    }
  }

  const std::array<Party, 3> parties{Party::kInitiator, Party::kResponder, Party::kAuthority};
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::set<Party> subset;
    std::vector<escrow::EscrowShare> shares;
    for (unsigned bit = 0; bit < 3; ++bit) {
      if (mask & (1u << bit)) {
        subset.insert(parties[bit]);
        shares.push_back(all_shares.at(parties[bit]));
      }
    }
    std::optional<ErrorCode> err;
    try {
      if (escrow::recover(*provider, *out.package, shares) != out.responder_session_secret) {
        err = ErrorCode::kAeadAuthFailure;
      }
    } catch (const EdhocError& e) {
      err = e.code();
    }
    out.subset_outcomes.emplace_back(std::move(subset), err);
  }
  return out;
}

}  // namespace edhoc::scenario

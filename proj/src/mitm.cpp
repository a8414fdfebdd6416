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

#include "edhoc/mitm.hpp"

#include <algorithm>

#include "edhoc/error.hpp"
#include "endpoint_actor.hpp"

namespace edhoc::mitm {

std::string_view impersonation_name(Impersonation i) {
  return i == Impersonation::kUseCompromisedKeys ? "compromised-keys" : "own-keys";
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "Success";
    case Outcome::kFailedAuthAtMsg2: return "FailedAuthAtMsg2";
    case Outcome::kFailedAuthAtMsg3: return "FailedAuthAtMsg3";
    case Outcome::kFailedDecode: return "FailedDecode";
    case Outcome::kTimeout: return "Timeout";
  }
  return "?";
}

Bytes apply_substitution(ByteView plaintext, const Substitution& sub) {
  if (sub.offset > plaintext.size() || sub.replacement.size() > plaintext.size() - sub.offset) {
    raise(ErrorCode::kInvalidArgument, "substitution runs past the plaintext");
  }
  Bytes out(plaintext.begin(), plaintext.end());
  std::copy(sub.replacement.begin(), sub.replacement.end(), out.begin() + static_cast<std::ptrdiff_t>(sub.offset));
  return out;
}

RelayState::RelayState(SessionState initiator_side, SessionState responder_side)
    : i_side_(std::move(initiator_side)), r_side_(std::move(responder_side)) {
  if (i_side_.phase() != Phase::kCompleted || r_side_.phase() != Phase::kCompleted) {
    raise(ErrorCode::kNotCompleted, "relay needs both legs completed");
  }
  keys_i_ = session_keys(i_side_);
  keys_r_ = session_keys(r_side_);
}

Bytes relay_record(const RelayState& relay, Direction direction, ByteView sealed_record,
                   const std::optional<Substitution>& modify) {
  const bool i2r = direction == Direction::kInitiatorToResponder;
  const SessionState& from = i2r ? relay.initiator_side() : relay.responder_side();
  const SessionState& to = i2r ? relay.responder_side() : relay.initiator_side();
  auto opened = open_record(*from.config().provider, traffic_keys(from, direction), sealed_record);
  Bytes plaintext = modify ? apply_substitution(opened.plaintext, *modify) : std::move(opened.plaintext);
  return seal_record(*to.config().provider, traffic_keys(to, direction), opened.seq, plaintext);
}

Outcome classify(const VictimView& initiator, const VictimView& responder) {
  if (initiator.phase == Phase::kCompleted && responder.phase == Phase::kCompleted &&
      initiator.believes_authenticated && responder.believes_authenticated) {
    return Outcome::kSuccess;
  }
  if (initiator.phase == Phase::kFailed && initiator.failed_round == 2) return Outcome::kFailedAuthAtMsg2;
  if ((responder.phase == Phase::kFailed && responder.failed_round >= 3) ||
      (initiator.phase == Phase::kFailed && initiator.failed_round >= 3)) {
    return Outcome::kFailedAuthAtMsg3;
  }
  if (initiator.decode_error || responder.decode_error) return Outcome::kFailedDecode;
  return Outcome::kTimeout;
}

void prepare_network(netsim::Network& net, const Endpoints& ids) {
  net.attach(ids.initiator);
  net.attach(ids.responder);
  net.attach(ids.adversary);
  net.add_rule({netsim::RuleKind::kRedirect, {ids.initiator, ids.responder}, ids.adversary});
  net.add_rule({netsim::RuleKind::kRedirect, {ids.responder, ids.initiator}, ids.adversary});
}

namespace {

using detail::Victim;

VictimView view_of(const Victim& victim) {
  VictimView v;
  v.phase = victim.state.phase();
  v.failure = victim.state.failure();
  v.failed_round = victim.state.failed_round();
  v.decode_error = victim.decode_error;
  v.believes_authenticated = victim.state.phase() == Phase::kCompleted && victim.state.peer_authenticated();
  v.peer_unverified = victim.state.peer_unverified();
  v.transitions = victim.state.transitions();
  v.error_records = static_cast<std::size_t>(std::count_if(
      v.transitions.begin(), v.transitions.end(), [](const TransitionRecord& t) { return t.error.has_value(); }));
  if (victim.decode_error) ++v.error_records;
  return v;
}

/// The dual-role endpoint: Responder toward the Initiator, Initiator toward
/// the Responder, spliced in lockstep.
class Adversary {
 public:
  Adversary(const AttackScenario& sc, netsim::Network& net) : sc_(sc), net_(net) {}

  void on_frame(const netsim::Frame& frame) {
    try {
      if (frame.from == sc_.ids.initiator) {
        from_initiator(frame.payload);
      } else if (frame.from == sc_.ids.responder) {
        from_responder(frame.payload);
      }
    } catch (const EdhocError& e) {
      if (!failure_) failure_ = e.code();
    }
  }

  std::optional<SessionState> i_side;
  std::optional<SessionState> r_side;

 private:
  const AttackConfig& cfg() const { return sc_.attack; }

  Credential identity(bool as_responder) const {
    if (cfg().impersonation == Impersonation::kUseOwnKeys) {
      const auto& own = as_responder ? cfg().own_as_responder : cfg().own_as_initiator;
      if (!own) raise(ErrorCode::kConfigInconsistent, "adversary has no own credential");
      return *own;
    }
    const Bytes& kid = as_responder ? cfg().victim_responder_kid : cfg().victim_initiator_kid;
    const Credential* c = cfg().adversary_store.find(kid);
    if (!c || !c->secret) raise(ErrorCode::kConfigInconsistent, "compromised credential lacks its secret");
    return *c;
  }

  SessionConfig leg_config(Role role, int method, const ProviderPtr& provider) const {
    SessionConfig c;
    c.role = role;
    c.method = method;
    c.provider = provider;
    c.own = identity(role == Role::kResponder);
    c.store = cfg().adversary_store;
    c.policy = TrustPolicy::weak_accept();
    c.verify_peer = false;
    c.credential_by_value = cfg().impersonation == Impersonation::kUseOwnKeys;
    const bool toward_initiator = role == Role::kResponder;
    c.use_message4 = toward_initiator ? sc_.initiator.use_message4 : sc_.responder.use_message4;
    const std::string leg = toward_initiator ? "adversary/i-side" : "adversary/r-side";
    c.rng_seed = derive_seed(sc_.seed, leg);
    c.connection_id = ConnectionId{Bytes{static_cast<std::uint8_t>(toward_initiator ? 0x2a : 0x2b)}};
    c.session_id = leg;
    for (auto label : {sc_.initiator.understood_ead_labels, sc_.responder.understood_ead_labels}) {
      c.understood_ead_labels.insert(label.begin(), label.end());
    }
    return c;
  }

  void from_initiator(const Bytes& payload) {
    if (!i_side) {
      const Message1 m1 = decode_message1(payload);
      auto provider = make_provider(m1.suite);
      SessionConfig r_cfg = leg_config(Role::kInitiator, m1.method, provider);
      r_cfg.ead_to_send[0] = m1.ead_1;
      if (cfg().copy_connection_ids) r_cfg.connection_id = m1.c_i;
      r_side = make_initiator(std::move(r_cfg));
      net_.send(sc_.ids.adversary, sc_.ids.responder, encode(initiator_start(*r_side)));

      SessionConfig i_cfg = leg_config(Role::kResponder, m1.method, provider);
      i_side = make_responder(std::move(i_cfg));
      pending_m1_ = m1;
      if (!cfg().copy_connection_ids) answer_initiator({});
      return;
    }
    if (i_side->phase() == Phase::kWaitMsg3) {
      const Message3 m3 = decode_message3(payload);
      if (auto m4 = responder_on_message3(*i_side, m3)) {
        net_.send(sc_.ids.adversary, sc_.ids.initiator, encode(*m4));
      }
      if (held_for_responder_) {
        net_.send(sc_.ids.adversary, sc_.ids.responder, std::move(*held_for_responder_));
        held_for_responder_.reset();
      }
    }
  }

  void from_responder(const Bytes& payload) {
    if (!r_side) return;
    if (r_side->phase() == Phase::kWaitMsg2) {
      const Message2 m2 = decode_message2(payload);
      const Message3 m3 = initiator_on_message2(*r_side, m2);
      if (pending_m1_) answer_initiator(m2.c_r);
      if (i_side && i_side->phase() == Phase::kCompleted) {
        net_.send(sc_.ids.adversary, sc_.ids.responder, encode(m3));
      } else {
        held_for_responder_ = encode(m3);
      }
    } else if (r_side->phase() == Phase::kWaitMsg4) {
      initiator_on_message4(*r_side, decode_message4(payload));
    }
  }

  void answer_initiator(std::optional<ConnectionId> copied_c_r) {
    Message1 m1 = std::move(*pending_m1_);
    pending_m1_.reset();
    if (copied_c_r) {
      // Rebuild the leg with the Responder's identifier before any message
      // leaves it.
      SessionConfig c = i_side->config();
      c.connection_id = *copied_c_r;
      i_side = make_responder(std::move(c));
    }
    Message2 m2 = responder_on_message1(*i_side, m1);
    net_.send(sc_.ids.adversary, sc_.ids.initiator, encode(m2));
  }

  const AttackScenario& sc_;
  netsim::Network& net_;
  std::optional<Message1> pending_m1_;
  std::optional<Bytes> held_for_responder_;
  std::optional<ErrorCode> failure_;
};

}  // namespace

AttackRun run_attack_full(netsim::Network& net, AttackScenario sc) {
  for (const auto& id : {sc.ids.initiator, sc.ids.responder, sc.ids.adversary}) {
    if (!net.attached(id)) raise(ErrorCode::kConfigInconsistent, "endpoint " + id.name + " not attached");
  }
  if (sc.attack.impersonation == Impersonation::kUseCompromisedKeys) {
    for (const Bytes* kid : {&sc.attack.victim_initiator_kid, &sc.attack.victim_responder_kid}) {
      const Credential* c = sc.attack.adversary_store.find(*kid);
      if (!c || !c->secret) raise(ErrorCode::kConfigInconsistent, "compromise requires the victims' secrets");
    }
  }

  Victim initiator{make_initiator(sc.initiator), sc.ids.initiator, sc.ids.responder, std::nullopt};
  Victim responder{make_responder(sc.responder), sc.ids.responder, sc.ids.initiator, std::nullopt};
  Adversary adversary(sc, net);

  net.send(initiator.self, initiator.peer, encode(initiator_start(initiator.state)));
  for (std::size_t i = 0; i < kMaxSteps && !net.idle(); ++i) {
    net.step();
    while (auto f = net.receive(sc.ids.initiator)) initiator.on_frame(net, *f);
    while (auto f = net.receive(sc.ids.responder)) responder.on_frame(net, *f);
    while (auto f = net.receive(sc.ids.adversary)) adversary.on_frame(*f);
  }

  AttackRun run;
  auto& report = run.report;
  report.initiator = view_of(initiator);
  report.responder = view_of(responder);
  report.steps = net.steps_taken();
  report.outcome = classify(report.initiator, report.responder);
  switch (report.outcome) {
    case Outcome::kFailedAuthAtMsg2:
      report.failing_party = sc.ids.initiator.name;
      report.failure_code = report.initiator.failure;
      break;
    case Outcome::kFailedAuthAtMsg3: {
      const bool r_failed = report.responder.phase == Phase::kFailed;
      report.failing_party = (r_failed ? sc.ids.responder : sc.ids.initiator).name;
      report.failure_code = r_failed ? report.responder.failure : report.initiator.failure;
      break;
    }
    case Outcome::kFailedDecode:
      report.failing_party = (report.initiator.decode_error ? sc.ids.initiator : sc.ids.responder).name;
      report.failure_code = report.initiator.decode_error ? report.initiator.decode_error : report.responder.decode_error;
      break;
    default: break;
  }

  const bool legs_done = adversary.i_side && adversary.r_side && adversary.i_side->phase() == Phase::kCompleted &&
                         adversary.r_side->phase() == Phase::kCompleted;
  if (report.outcome == Outcome::kSuccess && legs_done) {
    RelayState relay(std::move(*adversary.i_side), std::move(*adversary.r_side));
    const auto& i_secret = session_keys(initiator.state).exporter_secret;
    const auto& r_secret = session_keys(responder.state).exporter_secret;
    report.adversary_keys_match_victims = relay.keys_initiator_side().exporter_secret == i_secret &&
                                          relay.keys_responder_side().exporter_secret == r_secret;
    report.adversary_keys_distinct =
        relay.keys_initiator_side().exporter_secret != relay.keys_responder_side().exporter_secret;

    auto relay_direction = [&](Direction d, const std::vector<Bytes>& payloads) {
      const bool i2r = d == Direction::kInitiatorToResponder;
      const SessionState& sender = i2r ? initiator.state : responder.state;
      const SessionState& receiver = i2r ? responder.state : initiator.state;
      std::uint64_t seq = 0;
      for (const auto& p : payloads) {
        RelayedRecord rec{d, p, {}, false, false};
        const Bytes sealed = seal_record(*sender.config().provider, traffic_keys(sender, d), seq++, p);
        try {
          const Bytes forwarded = relay_record(relay, d, sealed, sc.attack.modify_records);
          rec.plaintext_out = open_record(*receiver.config().provider, traffic_keys(receiver, d), forwarded).plaintext;
          rec.accepted = true;
        } catch (const EdhocError&) {
          rec.accepted = false;
        }
        rec.modified = rec.accepted && rec.plaintext_out != p;
        report.relayed_records.push_back(std::move(rec));
      }
    };
    relay_direction(Direction::kInitiatorToResponder, sc.records_i2r);
    relay_direction(Direction::kResponderToInitiator, sc.records_r2i);
    run.relay.emplace(std::move(relay));
  }
  run.initiator.emplace(std::move(initiator.state));
  run.responder.emplace(std::move(responder.state));
  return run;
}

AttackReport run_attack(netsim::Network& net, AttackScenario scenario) {
  return run_attack_full(net, std::move(scenario)).report;
}

}  // namespace edhoc::mitm

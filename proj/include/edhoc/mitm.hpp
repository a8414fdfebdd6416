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

#include <optional>
#include <string>
#include <vector>

#include "edhoc/auth.hpp"
#include "edhoc/netsim.hpp"
#include "edhoc/protocol.hpp"
#include "edhoc/records.hpp"

namespace edhoc::mitm {

enum class Impersonation { kUseCompromisedKeys, kUseOwnKeys };

std::string_view impersonation_name(Impersonation i);

/// Replace plaintext bytes [offset, offset + replacement.size()).
struct Substitution {
  std::size_t offset = 0;
  Bytes replacement;
};

/// Throws INVALID_ARGUMENT when the range runs past the plaintext.
Bytes apply_substitution(ByteView plaintext, const Substitution& sub);

struct AttackConfig {
  /// Public credentials of both victims, plus their secrets when compromised.
  CredentialStore adversary_store;
  int method = 0;
  TrustPolicy initiator_policy;
  TrustPolicy responder_policy;
  Impersonation impersonation = Impersonation::kUseCompromisedKeys;
  /// Genuine victim identities to impersonate under UseCompromisedKeys.
  Bytes victim_initiator_kid;
  Bytes victim_responder_kid;
  /// Adversary's own credentials for UseOwnKeys: the one it shows the
  /// Initiator (acting as Responder) and the one it shows the Responder.
  std::optional<Credential> own_as_responder;
  std::optional<Credential> own_as_initiator;
  std::optional<Substitution> modify_records;
  /// Reuse the victims' connection identifiers on the adversary's legs
  /// instead of choosing fresh ones.
  bool copy_connection_ids = false;
};

/// The adversary's two completed legs.
class RelayState {
 public:
  /// Throws NOT_COMPLETED unless both legs are Completed.
  RelayState(SessionState initiator_side, SessionState responder_side);

  const SessionState& initiator_side() const { return i_side_; }
  const SessionState& responder_side() const { return r_side_; }
  const SessionKeys& keys_initiator_side() const { return keys_i_; }
  const SessionKeys& keys_responder_side() const { return keys_r_; }

 private:
  SessionState i_side_;
  SessionState r_side_;
  SessionKeys keys_i_;
  SessionKeys keys_r_;
};

/// Opens a record with the sender-side leg's traffic key, applies the
/// optional substitution, and reseals it for the receiver under the same
/// sequence number. Throws AEAD_AUTH_FAILURE for foreign records.
Bytes relay_record(const RelayState& relay, Direction direction, ByteView sealed_record,
                   const std::optional<Substitution>& modify);

enum class Outcome { kSuccess, kFailedAuthAtMsg2, kFailedAuthAtMsg3, kFailedDecode, kTimeout };

std::string_view outcome_name(Outcome o);

struct RelayedRecord {
  Direction direction;
  Bytes plaintext_in;
  Bytes plaintext_out;
  bool modified = false;
  bool accepted = false;
};

struct VictimView {
  Phase phase = Phase::kStart;
  std::optional<ErrorCode> failure;
  int failed_round = 0;
  std::optional<ErrorCode> decode_error;
  bool believes_authenticated = false;
  bool peer_unverified = false;
  std::size_t error_records = 0;
  std::vector<TransitionRecord> transitions;
};

struct AttackReport {
  Outcome outcome = Outcome::kTimeout;
  std::optional<std::string> failing_party;
  std::optional<ErrorCode> failure_code;
  VictimView initiator;
  VictimView responder;
  std::vector<RelayedRecord> relayed_records;
  /// Only meaningful on Success.
  bool adversary_keys_match_victims = false;
  bool adversary_keys_distinct = false;
  std::size_t steps = 0;
};

/// Maps the two victims' end states onto an outcome. Precedence: Success,
/// then a failure while processing message 2 on the Initiator, then one at
/// message 3 (or 4) on either victim, then frame decode errors, then Timeout.
Outcome classify(const VictimView& initiator, const VictimView& responder);

/// Upper bound on network steps before an unfinished run is a Timeout.
inline constexpr std::size_t kMaxSteps = 64;

struct Endpoints {
  netsim::EndpointId initiator{"I"};
  netsim::EndpointId responder{"R"};
  netsim::EndpointId adversary{"M"};
};

/// Attaches all three endpoints and installs the two Redirect rules that
/// steer victim traffic to the adversary.
void prepare_network(netsim::Network& net, const Endpoints& ids);

struct AttackScenario {
  SessionConfig initiator;
  SessionConfig responder;
  AttackConfig attack;
  /// Seeds the adversary's ephemerals.
  std::uint64_t seed = 0;
  Endpoints ids;
  /// Application payloads sent after the handshake, one per direction each.
  std::vector<Bytes> records_i2r;
  std::vector<Bytes> records_r2i;
};

struct AttackRun {
  AttackReport report;
  std::optional<SessionState> initiator;
  std::optional<SessionState> responder;
  std::optional<RelayState> relay;
};

/// Drives both victims and the adversary over `net` until quiescent or
/// kMaxSteps. Failures are reported, never thrown; only an inconsistent
/// scenario throws (CONFIG_INCONSISTENT).
AttackRun run_attack_full(netsim::Network& net, AttackScenario scenario);
AttackReport run_attack(netsim::Network& net, AttackScenario scenario);

}  // namespace edhoc::mitm

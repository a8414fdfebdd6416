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

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edhoc/escrow.hpp"
#include "edhoc/mitm.hpp"
#include "edhoc/netsim.hpp"
#include "edhoc/protocol.hpp"

/// Ready-made deployments: who holds which credential, and end-to-end
/// runners for the honest, MitM and lawful-interception scenarios.
namespace edhoc::scenario {

/// Long-term credentials of everyone involved, all derived from one seed.
/// PSKs are per party: each side authenticates with its own PSK, which the
/// other side holds in its store.
struct Cast {
  int method = 0;
  Credential initiator;
  Credential responder;
  Credential adversary_as_responder;
  Credential adversary_as_initiator;
};

Cast make_cast(const CryptoProvider& provider, int method, std::uint64_t seed);

struct HandshakeOptions {
  int method = 0;
  int suite = 0;
  std::uint64_t seed = 0;
  TrustPolicy initiator_policy;
  TrustPolicy responder_policy;
  bool use_message4 = false;
  /// The Responder's stored copy of the Initiator's PSK differs from the
  /// PSK the Initiator actually holds.
  bool psk_mismatch = false;
  /// Replace cast members whose kid matches ("I", "R", "M-r", "M-i").
  std::vector<Credential> credential_overrides;
};

/// make_cast with the options' overrides applied.
Cast cast_for(const CryptoProvider& provider, const HandshakeOptions& opt);

/// Victim/honest endpoint configs for a cast.
SessionConfig initiator_config(const Cast& cast, const HandshakeOptions& opt, const ProviderPtr& provider);
SessionConfig responder_config(const Cast& cast, const HandshakeOptions& opt, const ProviderPtr& provider);

struct HandshakeResult {
  std::optional<SessionState> initiator;
  std::optional<SessionState> responder;
  std::optional<ErrorCode> decode_error;
  bool completed = false;
  bool exporters_match = false;
  std::vector<TransitionRecord> transcript;
  std::string delivery_log;
};

/// Drives an honest pair over `net` (endpoints I and R are attached if
/// missing). Deliveries are reported through `on_delivery` as they happen.
HandshakeResult run_handshake(netsim::Network& net, const HandshakeOptions& opt,
                              const std::function<void(const netsim::Delivery&)>& on_delivery = {});
HandshakeResult run_handshake(const HandshakeOptions& opt);

// ---- MitM ------------------------------------------------------------------

struct MitmCell {
  int method = 0;
  mitm::Impersonation impersonation = mitm::Impersonation::kUseCompromisedKeys;
  TrustMode policy = TrustMode::kStrict;
  /// Adversary reuses the victims' connection identifiers on its legs.
  bool copy_connection_ids = false;
};

/// Success exactly when the adversary holds compromised keys or the victims
/// accept unverified credentials; otherwise the Initiator rejects message 2.
mitm::Outcome expected_outcome(const MitmCell& cell);

struct MitmResult {
  MitmCell cell;
  mitm::AttackReport report;
  mitm::Outcome expected;
  bool matches = false;
};

/// Records relayed in every Success run, and the adversary's edit.
const std::vector<Bytes>& sample_records_i2r();
const std::vector<Bytes>& sample_records_r2i();
mitm::Substitution sample_substitution();

mitm::AttackScenario make_attack_scenario(const MitmCell& cell, std::uint64_t seed, bool use_message4 = false);
MitmResult run_mitm_cell(const MitmCell& cell, std::uint64_t seed, bool use_message4 = false);

/// 5 methods x {own, compromised} x {Strict, WeakAccept}, in that nesting
/// order.
std::vector<MitmCell> full_matrix();

// ---- lawful interception -----------------------------------------------------

enum class Party { kInitiator, kResponder, kAuthority };

std::string_view party_name(Party p);

struct LiOptions {
  HandshakeOptions handshake;
  /// Whose shares reach the recovery step. Empty: no recovery attempted.
  std::set<Party> cooperating;
  /// Mirror both directions to the proxy. Off gives the control run.
  bool mirror = true;
};

struct LiResult {
  HandshakeResult handshake;
  escrow::InterceptionRecord record;
  std::optional<escrow::EscrowPackage> package;
  std::vector<escrow::EscrowShare> shares;
  bool recovery_attempted = false;
  std::optional<ErrorCode> recovery_error;
  Bytes responder_session_secret;
  /// Payloads the two legitimate endpoints received, in order.
  std::vector<Bytes> delivered_to_initiator;
  std::vector<Bytes> delivered_to_responder;
  /// Payloads sent on the I<->R path, in order.
  std::vector<Bytes> handshake_frames;
  /// Recovery outcome for every non-empty subset of the three shares.
  std::vector<std::pair<std::set<Party>, std::optional<ErrorCode>>> subset_outcomes;
};

LiResult run_li(const LiOptions& opt);

/// Escrow key pair of a party, derived from the scenario seed.
KeyPair escrow_keypair(const CryptoProvider& provider, Party party, std::uint64_t seed);

}  // namespace edhoc::scenario
